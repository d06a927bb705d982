#include "agora/http_backend.hpp"

#include <cstdlib>
#include <semaphore>
#include <thread>

#include "agora/errors.hpp"
#include "httplib.h"
#include "json.hpp"

namespace agora {

using nlohmann::json;

namespace {

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Endpoint split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ParamError("endpoint_url must start with http(s)://");
  const auto scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw ParamError("endpoint_url scheme must be http or https");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

bool retryable_status(int status) { return status == 408 || status == 429 || status >= 500; }

}  // namespace

void validate(const LlmBackendConfig& c) {
  if (c.endpoint_url.empty()) throw ParamError("llm.endpoint_url is required");
  split_url(c.endpoint_url);
  if (c.model_name.empty()) throw ParamError("llm.model_name is required");
  if (!(c.temperature >= 0.0)) throw ParamError("llm.temperature must be >= 0");
  if (c.max_output_tokens < 1) throw ParamError("llm.max_output_tokens must be >= 1");
  if (c.retries < 0 || c.retries > kMaxRetries) {
    throw ParamError("llm.retries must be within 0.." + std::to_string(kMaxRetries));
  }
  for (int ms : c.backoff_ms) {
    if (ms < 0) throw ParamError("llm.backoff_ms entries must be >= 0");
  }
  if (c.max_in_flight < 1) throw ParamError("llm.max_in_flight must be >= 1");
  if (c.timeout_seconds < 1) throw ParamError("llm.timeout_seconds must be >= 1");
}

struct HttpBackend::Impl {
  explicit Impl(int slots) : in_flight(slots) {}
  std::counting_semaphore<> in_flight;
  Endpoint endpoint;
};

HttpBackend::HttpBackend(LlmBackendConfig config, const PromptTemplates& templates)
    : config_(std::move(config)), templates_(templates) {
  validate(config_);
  impl_ = std::make_unique<Impl>(config_.max_in_flight);
  impl_->endpoint = split_url(config_.endpoint_url);
}

HttpBackend::~HttpBackend() = default;

RawReply HttpBackend::complete(const TurnRequest& request) {
  const std::string prompt = templates_.render(request.kind, request.view);
  const json body = {{"model", config_.model_name},
                     {"messages", json::array({{{"role", "user"}, {"content", prompt}}})},
                     {"temperature", config_.temperature},
                     {"max_tokens", config_.max_output_tokens}};
  const std::string payload = body.dump();

  httplib::Headers headers;
  if (!config_.api_key_env.empty()) {
    const char* key = std::getenv(config_.api_key_env.c_str());
    if (key == nullptr || *key == '\0') {
      throw BackendError("environment variable " + config_.api_key_env + " is not set");
    }
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }

  std::string last_problem;
  for (int attempt = 0; attempt <= config_.retries; ++attempt) {
    if (attempt > 0 && !config_.backoff_ms.empty()) {
      const auto i = std::min<std::size_t>(attempt - 1, config_.backoff_ms.size() - 1);
      std::this_thread::sleep_for(std::chrono::milliseconds(config_.backoff_ms[i]));
    }

    httplib::Result res;
    {
      impl_->in_flight.acquire();
      struct Release {
        std::counting_semaphore<>& s;
        ~Release() { s.release(); }
      } release{impl_->in_flight};
      httplib::Client client(impl_->endpoint.origin);
      client.set_connection_timeout(config_.timeout_seconds, 0);
      client.set_read_timeout(config_.timeout_seconds, 0);
      client.set_write_timeout(config_.timeout_seconds, 0);
      res = client.Post(impl_->endpoint.path, headers, payload, "application/json");
    }

    if (!res) {
      last_problem = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      last_problem = "HTTP " + std::to_string(res->status);
      if (retryable_status(res->status)) continue;
      break;
    }

    RawReply reply;
    try {
      const json doc = json::parse(res->body);
      reply.content = doc.at("choices").at(0).at("message").at("content").get<std::string>();
      if (config_.scheme == TokenScheme::kProviderReported) {
        const json& usage = doc.at("usage");
        reply.input_tokens = usage.at("prompt_tokens").get<std::int64_t>();
        reply.output_tokens = usage.at("completion_tokens").get<std::int64_t>();
        if (reply.input_tokens < 0 || reply.output_tokens < 0) {
          throw BackendError("negative token usage in response");
        }
      } else {
        reply.input_tokens = count_tokens(prompt, config_.scheme);
        reply.output_tokens = count_tokens(reply.content, config_.scheme);
      }
    } catch (const json::exception& e) {
      throw BackendError(std::string("malformed chat-completions response: ") + e.what());
    }
    return reply;
  }
  throw BackendError("request to " + impl_->endpoint.origin + impl_->endpoint.path + " failed after " +
                     std::to_string(config_.retries + 1) + " attempt(s): " + last_problem);
}

}  // namespace agora
