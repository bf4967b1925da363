#include "eagle/gateway.hpp"

#include <unistd.h>

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace eagle {
namespace {

using nlohmann::json;

constexpr int kCacheSchemaVersion = 1;

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void validate(const ChatRequest& request) {
  if (request.messages.empty()) {
    throw Error(ErrorKind::ArgumentRange, "request needs at least one message");
  }
  if (request.temperature < 0.0) {
    throw Error(ErrorKind::ArgumentRange, "temperature must be >= 0");
  }
}

json response_to_json(const ChatResponse& response) {
  return json{{"content", response.content},
              {"finish_reason", to_string(response.finish_reason)},
              {"usage",
               {{"prompt_tokens", response.usage.prompt_tokens},
                {"completion_tokens", response.usage.completion_tokens},
                {"total_tokens", response.usage.total_tokens}}}};
}

ChatResponse response_from_json(const json& j) {
  ChatResponse response;
  response.content = j.at("content").get<std::string>();
  response.finish_reason =
      finish_reason_from_string(j.at("finish_reason").get<std::string>());
  if (j.contains("usage")) {
    const auto& u = j.at("usage");
    response.usage.prompt_tokens = u.value("prompt_tokens", 0L);
    response.usage.completion_tokens = u.value("completion_tokens", 0L);
    response.usage.total_tokens = u.value("total_tokens", 0L);
  }
  return response;
}

struct ParsedBase {
  std::string host_port;  // scheme://host[:port]
  std::string path;       // prefix, no trailing slash
};

ParsedBase parse_api_base(const std::string& base) {
  auto scheme_end = base.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorKind::TransportError, "api base needs a scheme: " + base);
  }
  auto path_start = base.find('/', scheme_end + 3);
  ParsedBase parsed;
  if (path_start == std::string::npos) {
    parsed.host_port = base;
  } else {
    parsed.host_port = base.substr(0, path_start);
    parsed.path = base.substr(path_start);
  }
  while (!parsed.path.empty() && parsed.path.back() == '/') parsed.path.pop_back();
  return parsed;
}

}  // namespace

const char* to_string(FinishReason r) {
  switch (r) {
    case FinishReason::Stop: return "stop";
    case FinishReason::Length: return "length";
    case FinishReason::ContentFilter: return "content_filter";
    case FinishReason::Unknown: return "unknown";
  }
  return "unknown";
}

FinishReason finish_reason_from_string(std::string_view s) {
  if (s == "stop") return FinishReason::Stop;
  if (s == "length") return FinishReason::Length;
  if (s == "content_filter") return FinishReason::ContentFilter;
  return FinishReason::Unknown;
}

ChatGateway::ChatGateway(GatewayConfig config) : config_(std::move(config)) {
  if (config_.api_key.empty()) {
    if (const char* env = std::getenv("EAGLE_API_KEY")) config_.api_key = env;
  }
  if (!config_.sleep_fn) {
    config_.sleep_fn = [](std::chrono::milliseconds d) {
      std::this_thread::sleep_for(d);
    };
  }
  if (!config_.cache_dir.empty()) {
    std::filesystem::create_directories(config_.cache_dir);
  }
}

std::string ChatGateway::canonical_json(const ChatRequest& request) {
  // nlohmann objects keep keys sorted, so dump() is canonical; messages
  // stay an ordered array.
  json messages = json::array();
  for (const auto& m : request.messages) {
    messages.push_back({{"content", m.content}, {"role", m.role}});
  }
  json j{{"max_tokens", request.max_tokens},
         {"messages", std::move(messages)},
         {"model", request.model_name},
         {"temperature", request.temperature}};
  return j.dump();
}

std::string ChatGateway::cache_key(const ChatRequest& request) {
  return hex64(fnv1a64(canonical_json(request)));
}

std::optional<ChatResponse> ChatGateway::get_cached(const ChatRequest& request) const {
  if (config_.cache_dir.empty()) return std::nullopt;
  const auto path =
      std::filesystem::path(config_.cache_dir) / (cache_key(request) + ".json");
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    const json doc = json::parse(buf.str());
    return response_from_json(doc.at("response"));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::TransportError,
                "corrupt cache entry '" + path.string() + "': " + e.what());
  }
}

void ChatGateway::put_cached(const ChatRequest& request,
                             const ChatResponse& response) const {
  if (config_.cache_dir.empty()) return;
  const auto dir = std::filesystem::path(config_.cache_dir);
  std::filesystem::create_directories(dir);
  const std::string key = cache_key(request);
  const auto final_path = dir / (key + ".json");

  json doc{{"schema_version", kCacheSchemaVersion},
           {"request", json::parse(canonical_json(request))},
           {"response", response_to_json(response)}};

  static std::atomic<unsigned> counter{0};
  const auto tmp_path =
      dir / (key + ".tmp." + std::to_string(counter.fetch_add(1)) + "." +
             std::to_string(static_cast<unsigned long>(::getpid())));
  {
    std::ofstream out(tmp_path, std::ios::binary);
    if (!out) {
      throw Error(ErrorKind::TransportError,
                  "cannot write cache entry '" + tmp_path.string() + "'");
    }
    out << doc.dump(2) << "\n";
  }
  std::filesystem::rename(tmp_path, final_path);
}

ChatResponse ChatGateway::complete(const ChatRequest& request) {
  validate(request);
  if (auto cached = get_cached(request)) return *cached;
  if (config_.replay_only) {
    throw Error(ErrorKind::ReplayMiss,
                "no cached response for request " + cache_key(request));
  }
  ChatResponse response = complete_over_http(request);
  put_cached(request, response);
  return response;
}

ChatResponse ChatGateway::complete_over_http(const ChatRequest& request) {
  if (config_.api_key.empty()) {
    throw Error(ErrorKind::AuthMissing,
                "no API key; set EAGLE_API_KEY or pass --api-key");
  }
  if (config_.api_base.empty()) {
    throw Error(ErrorKind::TransportError, "no api base configured");
  }
  const ParsedBase base = parse_api_base(config_.api_base);

  json body{{"model", request.model_name},
            {"temperature", request.temperature},
            {"max_tokens", request.max_tokens}};
  json messages = json::array();
  for (const auto& m : request.messages) {
    messages.push_back({{"role", m.role}, {"content", m.content}});
  }
  body["messages"] = std::move(messages);
  const std::string payload = body.dump();

  const httplib::Headers headers = {
      {"Authorization", "Bearer " + config_.api_key}};

  std::string last_error;
  bool rate_limited = false;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      config_.sleep_fn(config_.backoff_base * (1 << (attempt - 1)));
    }
    httplib::Client client(base.host_port);
    client.set_connection_timeout(config_.timeout);
    client.set_read_timeout(config_.timeout);

    auto result = client.Post(base.path + "/chat/completions", headers, payload,
                              "application/json");
    if (!result) {
      rate_limited = false;
      last_error = "transport failure: " + httplib::to_string(result.error());
      continue;  // retried
    }
    if (result->status == 429) {
      rate_limited = true;
      last_error = "rate limited (429)";
      continue;  // retried
    }
    if (result->status == 401 || result->status == 403) {
      throw Error(ErrorKind::AuthMissing,
                  "API key rejected (status " + std::to_string(result->status) + ")");
    }
    if (result->status != 200) {
      // Generation errors are not retried.
      throw Error(ErrorKind::TransportError,
                  "status " + std::to_string(result->status) + ": " + result->body);
    }
    try {
      const json doc = json::parse(result->body);
      const auto& choice = doc.at("choices").at(0);
      ChatResponse response;
      response.content = choice.at("message").at("content").get<std::string>();
      response.finish_reason =
          finish_reason_from_string(choice.value("finish_reason", "unknown"));
      if (doc.contains("usage")) {
        const auto& u = doc.at("usage");
        response.usage.prompt_tokens = u.value("prompt_tokens", 0L);
        response.usage.completion_tokens = u.value("completion_tokens", 0L);
        response.usage.total_tokens = u.value("total_tokens", 0L);
      }
      return response;
    } catch (const json::exception& e) {
      throw Error(ErrorKind::TransportError,
                  std::string("malformed completion body: ") + e.what());
    }
  }
  throw Error(rate_limited ? ErrorKind::RateLimited : ErrorKind::TransportError,
              last_error + " after " + std::to_string(config_.max_retries) +
                  " retries");
}

std::vector<ChatGateway::BatchOutcome> ChatGateway::batch_complete(
    const std::vector<ChatRequest>& requests, int max_in_flight) {
  if (max_in_flight < 1) {
    throw Error(ErrorKind::ArgumentRange, "max_in_flight must be >= 1");
  }
  std::vector<BatchOutcome> outcomes(requests.size());
  if (requests.empty()) return outcomes;

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= requests.size()) break;
      try {
        outcomes[i].response = complete(requests[i]);
      } catch (const Error& e) {
        outcomes[i].error_kind = e.kind();
        outcomes[i].error = e.what();
      } catch (const std::exception& e) {
        outcomes[i].error = e.what();
      }
    }
  };

  const std::size_t n_workers =
      std::min(static_cast<std::size_t>(max_in_flight), requests.size());
  std::vector<std::thread> threads;
  threads.reserve(n_workers);
  for (std::size_t w = 0; w < n_workers; ++w) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  return outcomes;
}

}  // namespace eagle
