// Chat-completion stub: answers POST requests from a table of canned
// responses so caches can be recorded without a real model.
//
//   epix_stub_server --answers answers.jsonl [--port 8089] [--fail-first N]
//
// Each answers line is {"model": "...", "match": "...", "content": "..."}.
// The first entry whose model equals the request model (or is "*") and whose
// match occurs in the last user message wins; otherwise the reply says it
// cannot tell.

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

struct Answer {
  std::string model;
  std::string match;
  std::string content;
};

std::vector<Answer> load_answers(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::vector<Answer> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto j = nlohmann::json::parse(line);
    out.push_back({j.value("model", "*"), j.value("match", ""), j.at("content").get<std::string>()});
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::string answers_path;
  int port = 8089;
  int fail_first = 0;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--answers" && i + 1 < argc) {
      answers_path = argv[++i];
    } else if (a == "--port" && i + 1 < argc) {
      port = std::atoi(argv[++i]);
    } else if (a == "--fail-first" && i + 1 < argc) {
      fail_first = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: epix_stub_server --answers FILE [--port N] [--fail-first N]\n";
      return 2;
    }
  }
  std::vector<Answer> answers;
  try {
    if (!answers_path.empty()) answers = load_answers(answers_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  std::atomic<int> seen{0};
  httplib::Server server;
  server.Post(".*", [&](const httplib::Request& req, httplib::Response& res) {
    if (seen++ < fail_first) {
      res.status = 503;
      res.set_content("{\"error\":\"unavailable\"}", "application/json");
      return;
    }
    auto body = nlohmann::json::parse(req.body, nullptr, false);
    if (body.is_discarded()) {
      res.status = 400;
      return;
    }
    std::string model = body.value("model", "");
    std::string query;
    for (const auto& m : body.value("messages", nlohmann::json::array()))
      if (m.value("role", "") == "user") query = m.value("content", "");
    std::string content = "I cannot tell from this report.";
    for (const auto& a : answers) {
      if ((a.model == "*" || a.model == model) && query.find(a.match) != std::string::npos) {
        content = a.content;
        break;
      }
    }
    nlohmann::ordered_json reply;
    reply["id"] = "stub";
    reply["object"] = "chat.completion";
    reply["model"] = model;
    reply["choices"] = {{{"index", 0},
                         {"message", {{"role", "assistant"}, {"content", content}}},
                         {"finish_reason", "stop"}}};
    res.set_content(reply.dump(), "application/json");
  });
  std::cerr << "listening on 127.0.0.1:" << port << "\n";
  return server.listen("127.0.0.1", port) ? 0 : 1;
}
