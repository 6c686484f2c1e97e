#pragma once

// Reported (precision, recall, F1) rows per field, three decimals.

namespace epix::testing {

struct ScoreRow {
  const char* field;
  const char* extractor;
  double precision;
  double recall;
  double f1;
};

inline constexpr ScoreRow kReportedScores[] = {
    {"disease", "EpiTator", 0.692, 0.719, 0.705},
    {"disease", "Pythia-12b", 0.712, 0.773, 0.742},
    {"disease", "Mpt-30b-chat", 0.74, 0.891, 0.809},
    {"disease", "Llama-2-70b-chat", 0.757, 0.898, 0.821},
    {"disease", "Mistral-7b-open", 0.755, 0.891, 0.817},
    {"disease", "Zephyr-7b-alpha", 0.752, 0.875, 0.809},
    {"disease", "Gpt-35-turbo-16k", 0.75, 0.961, 0.842},
    {"disease", "Gpt-4-32k", 0.756, 0.945, 0.84},
    {"disease", "Gpt-4-FewShots", 0.77, 0.914, 0.836},
    {"disease", "Open-Ensemble", 0.756, 0.921, 0.83},
    {"country", "EpiTator", 0.978, 0.819, 0.892},
    {"country", "Pythia-12b", 0.962, 0.452, 0.615},
    {"country", "Mpt-30b-chat", 0.979, 0.855, 0.913},
    {"country", "Llama-2-70b-chat", 0.98, 0.898, 0.937},
    {"country", "Mistral-7b-open", 0.986, 0.861, 0.92},
    {"country", "Zephyr-7b-alpha", 0.981, 0.91, 0.944},
    {"country", "Gpt-35-turbo-16k", 0.981, 0.91, 0.944},
    {"country", "Gpt-4-32k", 0.981, 0.928, 0.954},
    {"country", "Gpt-4-FewShots", 0.981, 0.928, 0.954},
    {"country", "Open-Ensemble", 0.981, 0.91, 0.944},
    {"date", "EpiTator", 0.892, 0.576, 0.7},
    {"date", "Pythia-12b", 0.735, 0.158, 0.26},
    {"date", "Mpt-30b-chat", 0.814, 0.304, 0.442},
    {"date", "Llama-2-70b-chat", 0.916, 0.759, 0.83},
    {"date", "Mistral-7b-open", 0.908, 0.69, 0.784},
    {"date", "Zephyr-7b-alpha", 0.92, 0.804, 0.858},
    {"date", "Gpt-35-turbo-16k", 0.902, 0.639, 0.748},
    {"date", "Gpt-4-32k", 0.913, 0.734, 0.814},
    {"date", "Gpt-4-FewShots", 0.904, 0.658, 0.762},
    {"date", "Open-Ensemble", 0.92, 0.804, 0.858},
    {"count", "EpiTator", 0.387, 0.321, 0.351},
    {"count", "Pythia-12b", 0.365, 0.277, 0.315},
    {"count", "Mpt-30b-chat", 0.619, 0.464, 0.531},
    {"count", "Llama-2-70b-chat", 0.561, 0.536, 0.548},
    {"count", "Mistral-7b-open", 0.67, 0.527, 0.59},
    {"count", "Zephyr-7b-alpha", 0.615, 0.571, 0.593},
    {"count", "Gpt-35-turbo-16k", 0.699, 0.455, 0.551},
    {"count", "Gpt-4-32k", 0.673, 0.589, 0.629},
    {"count", "Gpt-4-FewShots", 0.733, 0.589, 0.653},
    {"count", "Open-Ensemble", 0.625, 0.581, 0.601},
};

}  // namespace epix::testing
