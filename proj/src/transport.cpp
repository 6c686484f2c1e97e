#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "epix/transport.hpp"

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <thread>

#include "epix/digest.hpp"
#include "epix/error.hpp"
#include "epix/io.hpp"
#include "epix/text.hpp"

namespace epix {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string_view to_string(TransportMode m) noexcept {
  switch (m) {
    case TransportMode::Live: return "live";
    case TransportMode::Record: return "record";
    case TransportMode::Replay: return "replay";
  }
  return "replay";
}

std::optional<TransportMode> transport_mode_from_string(std::string_view s) noexcept {
  if (text::iequals(s, "live")) return TransportMode::Live;
  if (text::iequals(s, "record")) return TransportMode::Record;
  if (text::iequals(s, "replay")) return TransportMode::Replay;
  return std::nullopt;
}

namespace {

class HttplibPoster final : public HttpPoster {
 public:
  HttplibPoster(std::chrono::seconds connect, std::chrono::seconds read) : connect_(connect), read_(read) {}

  HttpResponse post(const std::string& url, const std::string& body,
                    const std::map<std::string, std::string>& headers) override {
    auto scheme = url.find("://");
    if (scheme == std::string::npos) return {0, {}, "endpoint URL has no scheme: " + url};
    auto slash = url.find('/', scheme + 3);
    std::string origin = url.substr(0, slash);
    std::string path = slash == std::string::npos ? "/" : url.substr(slash);

    httplib::Client client(origin);
    client.set_connection_timeout(connect_);
    client.set_read_timeout(read_);
    client.set_write_timeout(read_);
    httplib::Headers h;
    for (const auto& [k, v] : headers) h.emplace(k, v);
    auto res = client.Post(path, h, body, "application/json");
    if (!res) return {0, {}, httplib::to_string(res.error())};
    return {res->status, res->body, {}};
  }

 private:
  std::chrono::seconds connect_;
  std::chrono::seconds read_;
};

bool transient(int status) { return status == 0 || status == 408 || status == 429 || status >= 500; }

}  // namespace

std::shared_ptr<HttpPoster> make_http_poster(std::chrono::seconds connect_timeout, std::chrono::seconds read_timeout) {
  return std::make_shared<HttplibPoster>(connect_timeout, read_timeout);
}

std::string request_body(const ModelProfile& model, std::span<const Message> messages, const Sampling& sampling) {
  ordered_json j;
  j["model"] = model.wire_name();
  j["messages"] = ordered_json::array();
  for (const auto& m : messages) j["messages"].push_back({{"role", m.role}, {"content", m.content}});
  j["temperature"] = sampling.temperature;
  j["max_tokens"] = sampling.max_tokens;
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

std::string request_digest(const ModelProfile& model, std::span<const Message> messages, const Sampling& sampling) {
  return sha256_hex(request_body(model, messages, sampling));
}

std::string response_content(std::string_view response_body) {
  json j = json::parse(response_body, nullptr, false);
  if (j.is_discarded()) throw TransportError("response is not JSON");
  try {
    const auto& content = j.at("choices").at(0).at("message").at("content");
    if (content.is_null()) return {};
    return content.get<std::string>();
  } catch (const json::exception&) {
    throw TransportError("response has no choices[0].message.content");
  }
}

Transport::Transport(TransportMode mode, std::filesystem::path cache_dir, RetryPolicy retry,
                     std::shared_ptr<HttpPoster> poster)
    : mode_(mode), cache_dir_(std::move(cache_dir)), retry_(retry), poster_(std::move(poster)) {
  if (retry_.max_attempts < 1) throw ConfigError("retry max_attempts must be >= 1");
  if (!poster_) poster_ = make_http_poster();
  if (const char* key = std::getenv("EPIX_API_KEY"); key && *key) api_key_ = key;
  sleep_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

std::filesystem::path Transport::cache_path(const std::string& digest) const {
  return cache_dir_ / (digest + ".json");
}

bool Transport::cached(const std::string& digest) const {
  std::error_code ec;
  return std::filesystem::is_regular_file(cache_path(digest), ec);
}

std::string Transport::complete(const ModelProfile& model, std::span<const Message> messages,
                                const Sampling& sampling) {
  const auto body = request_body(model, messages, sampling);
  const auto digest = sha256_hex(body);

  if (mode_ != TransportMode::Live && cached(digest)) {
    auto entry = json::parse(io::read_file(cache_path(digest)), nullptr, false);
    if (entry.is_discarded() || !entry.contains("response")) {
      throw TransportError("corrupt cache entry " + cache_path(digest).string());
    }
    const auto& response = entry["response"];
    return response_content(response.is_string() ? response.get<std::string>() : response.dump());
  }
  if (mode_ == TransportMode::Replay) {
    throw CacheMiss("no cached response for model " + model.name + " (digest " + digest + ")");
  }

  std::string raw_response;
  auto content = call_endpoint(model, body, raw_response);
  if (mode_ == TransportMode::Record) write_cache(digest, body, raw_response);
  return content;
}

std::string Transport::call_endpoint(const ModelProfile& model, const std::string& body, std::string& raw_response) {
  const std::string& url = model.endpoint.empty() ? default_endpoint_ : model.endpoint;
  if (url.empty()) throw TransportError("no endpoint configured for model " + model.name);
  if (!api_key_) throw AuthError("EPIX_API_KEY is not set");

  const std::map<std::string, std::string> headers{{"Authorization", "Bearer " + *api_key_}};
  std::string last_error;
  auto delay = retry_.backoff_base;
  for (int attempt = 1; attempt <= retry_.max_attempts; ++attempt) {
    ++network_calls_;
    auto res = poster_->post(url, body, headers);
    if (res.status == 200) {
      raw_response = res.body;
      return response_content(res.body);
    }
    if (res.status == 401 || res.status == 403) {
      throw AuthError("credential rejected by " + url + " (HTTP " + std::to_string(res.status) + ")");
    }
    last_error = res.status ? "HTTP " + std::to_string(res.status) : res.error;
    if (!transient(res.status)) break;
    if (attempt < retry_.max_attempts) {
      sleep_(delay);
      delay *= 2;
    }
  }
  throw TransportError("request to " + url + " for model " + model.name + " failed: " + last_error);
}

void Transport::write_cache(const std::string& digest, const std::string& body, const std::string& raw_response) {
  ordered_json entry;
  entry["digest"] = digest;
  entry["request"] = ordered_json::parse(body);
  auto parsed = ordered_json::parse(raw_response, nullptr, false);
  entry["response"] = parsed.is_discarded() ? ordered_json(raw_response) : parsed;
  std::lock_guard lock(cache_mutex_);
  io::write_file_atomic(cache_path(digest), entry.dump(2, ' ', false, json::error_handler_t::replace) + "\n");
}

std::string complete(Transport& transport, const ModelProfile& model, std::span<const Message> messages,
                     const Sampling& sampling) {
  return transport.complete(model, messages, sampling);
}

}  // namespace epix
