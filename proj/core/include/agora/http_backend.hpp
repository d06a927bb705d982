#pragma once

#include <chrono>
#include <memory>
#include <string>
#include <vector>

#include "agora/agent.hpp"
#include "agora/prompt.hpp"
#include "agora/tokens.hpp"

namespace agora {

struct LlmBackendConfig {
  std::string endpoint_url;  // full chat-completions URL, e.g. http://host:8000/v1/chat/completions
  std::string model_name;
  double temperature = 0.0;
  int max_output_tokens = 512;
  int retries = 2;                           // extra attempts after the first
  std::vector<int> backoff_ms = {250, 1000};  // delay before retry i; the last entry repeats
  std::string api_key_env;                   // empty: send no Authorization header
  int max_in_flight = 4;
  int timeout_seconds = 60;
  /// provider_reported reads the usage block; the other schemes count locally.
  TokenScheme scheme = TokenScheme::kProviderReported;
};

inline constexpr int kMaxRetries = 10;

/// Throws ParamError on an invalid config.
void validate(const LlmBackendConfig& config);

/// OpenAI-compatible chat-completions client. Thread-safe; concurrent calls
/// beyond `max_in_flight` wait for a slot.
class HttpBackend final : public Backend {
 public:
  explicit HttpBackend(LlmBackendConfig config,
                       const PromptTemplates& templates = PromptTemplates::defaults());
  ~HttpBackend() override;

  RawReply complete(const TurnRequest& request) override;
  TokenScheme token_scheme() const override { return config_.scheme; }
  const LlmBackendConfig& config() const { return config_; }

 private:
  struct Impl;
  LlmBackendConfig config_;
  PromptTemplates templates_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace agora
