#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "eagle/errors.hpp"

namespace eagle {

struct ChatMessage {
  std::string role;
  std::string content;
};

enum class FinishReason { Stop, Length, ContentFilter, Unknown };

const char* to_string(FinishReason r);
FinishReason finish_reason_from_string(std::string_view s);

struct TokenUsage {
  long prompt_tokens = 0;
  long completion_tokens = 0;
  long total_tokens = 0;
};

struct ChatRequest {
  std::string model_name;
  std::vector<ChatMessage> messages;
  double temperature = 0.0;
  int max_tokens = 1024;
};

struct ChatResponse {
  std::string content;
  FinishReason finish_reason = FinishReason::Stop;
  TokenUsage usage;
};

struct GatewayConfig {
  // e.g. "http://127.0.0.1:8089/v1"; requests go to <base>/chat/completions.
  std::string api_base;
  // Falls back to the EAGLE_API_KEY environment variable when empty.
  std::string api_key;
  // One JSON file per request hash; empty disables caching.
  std::string cache_dir;
  // Serve from cache only; a miss raises ReplayMiss instead of calling out.
  bool replay_only = false;
  int max_retries = 4;
  std::chrono::milliseconds backoff_base{1000};
  std::chrono::milliseconds timeout{60000};
  // Injectable for tests; defaults to this_thread::sleep_for.
  std::function<void(std::chrono::milliseconds)> sleep_fn;
};

/// Chat-completion client with a content-addressed response cache.
/// Identical canonicalized requests share one cache entry, so a replay
/// directory makes whole pipeline runs reproducible offline.
class ChatGateway {
 public:
  explicit ChatGateway(GatewayConfig config);

  static std::string canonical_json(const ChatRequest& request);
  static std::string cache_key(const ChatRequest& request);

  /// Cache lookup, then (unless replay_only) one HTTP round trip with
  /// exponential backoff on rate-limit and transport failures.
  ChatResponse complete(const ChatRequest& request);

  struct BatchOutcome {
    std::optional<ChatResponse> response;
    std::optional<ErrorKind> error_kind;
    std::string error;
    bool ok() const { return response.has_value(); }
  };

  /// Completes every request with at most max_in_flight outstanding at
  /// once. Outcomes are in input order; per-item failures are recorded,
  /// never thrown.
  std::vector<BatchOutcome> batch_complete(const std::vector<ChatRequest>& requests,
                                           int max_in_flight);

  std::optional<ChatResponse> get_cached(const ChatRequest& request) const;
  /// Atomic write (temp file + rename), safe for concurrent writers.
  void put_cached(const ChatRequest& request, const ChatResponse& response) const;

  const GatewayConfig& config() const { return config_; }

 private:
  ChatResponse complete_over_http(const ChatRequest& request);

  GatewayConfig config_;
};

}  // namespace eagle
