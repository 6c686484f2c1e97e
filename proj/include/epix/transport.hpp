#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "epix/prompt.hpp"

namespace epix {

enum class TransportMode { Live, Record, Replay };

std::string_view to_string(TransportMode m) noexcept;
std::optional<TransportMode> transport_mode_from_string(std::string_view s) noexcept;

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds backoff_base{500};  // doubled after each failed attempt
};

struct Sampling {
  double temperature = 0.0;
  int max_tokens = 512;
};

struct HttpResponse {
  int status = 0;          // 0 when no HTTP response was received
  std::string body;
  std::string error;       // transport-level failure description
};

// The one network primitive the transport needs. Swappable for tests.
class HttpPoster {
 public:
  virtual ~HttpPoster() = default;
  virtual HttpResponse post(const std::string& url, const std::string& body,
                            const std::map<std::string, std::string>& headers) = 0;
};

// cpp-httplib backed poster; http:// and https:// URLs.
std::shared_ptr<HttpPoster> make_http_poster(std::chrono::seconds connect_timeout = std::chrono::seconds(10),
                                             std::chrono::seconds read_timeout = std::chrono::seconds(120));

// Chat-completion request body: {model, messages:[{role, content}], temperature, max_tokens}.
std::string request_body(const ModelProfile& model, std::span<const Message> messages, const Sampling& sampling);

// SHA-256 over the serialized request body, so any byte change in the model
// name, a message or the sampling parameters changes the digest.
std::string request_digest(const ModelProfile& model, std::span<const Message> messages, const Sampling& sampling);

// LIVE always calls the endpoint and never touches the cache. RECORD serves
// cached entries and calls the endpoint on a miss, persisting the response.
// REPLAY serves cached entries only and never opens a connection.
//
// Thread-safe: complete() may be called concurrently; cache writes are
// serialized.
class Transport {
 public:
  Transport(TransportMode mode, std::filesystem::path cache_dir, RetryPolicy retry = {},
            std::shared_ptr<HttpPoster> poster = nullptr);

  // Throws CacheMiss (REPLAY without entry), AuthError (missing or rejected
  // credential), TransportError (retries exhausted, bad response).
  std::string complete(const ModelProfile& model, std::span<const Message> messages, const Sampling& sampling = {});

  TransportMode mode() const noexcept { return mode_; }
  const std::filesystem::path& cache_dir() const noexcept { return cache_dir_; }
  std::filesystem::path cache_path(const std::string& digest) const;
  bool cached(const std::string& digest) const;

  // Used when a profile has no endpoint of its own.
  void set_default_endpoint(std::string url) { default_endpoint_ = std::move(url); }
  // Defaults to the EPIX_API_KEY environment variable.
  void set_api_key(std::optional<std::string> key) { api_key_ = std::move(key); }
  void set_sleep(std::function<void(std::chrono::milliseconds)> sleep) { sleep_ = std::move(sleep); }

  std::size_t network_calls() const noexcept { return network_calls_.load(); }

 private:
  std::string call_endpoint(const ModelProfile& model, const std::string& body, std::string& raw_response);
  void write_cache(const std::string& digest, const std::string& body, const std::string& raw_response);

  TransportMode mode_;
  std::filesystem::path cache_dir_;
  RetryPolicy retry_;
  std::shared_ptr<HttpPoster> poster_;
  std::string default_endpoint_;
  std::optional<std::string> api_key_;
  std::function<void(std::chrono::milliseconds)> sleep_;
  std::atomic<std::size_t> network_calls_{0};
  std::mutex cache_mutex_;
};

// Free-function form of Transport::complete.
std::string complete(Transport& transport, const ModelProfile& model, std::span<const Message> messages,
                     const Sampling& sampling = {});

// choices[0].message.content of a chat-completion response body. Throws
// TransportError when absent.
std::string response_content(std::string_view response_body);

}  // namespace epix
