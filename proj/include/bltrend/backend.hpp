#pragma once

#include <chrono>
#include <memory>
#include <string>
#include <vector>

#include "bltrend/corpus.hpp"
#include "bltrend/rubric.hpp"

namespace bltrend {

/// A judge model, written "provider:model_name" (e.g. "openai:gpt-4o-2024-05-13").
struct ModelId {
    std::string provider;
    std::string model_name;

    /// Throws ConfigError when either half is empty or the colon is missing.
    static ModelId parse(std::string_view text);
    std::string str() const { return provider + ":" + model_name; }

    auto operator<=>(const ModelId&) const = default;
};

/// A rejected judge answer and why it was rejected; replayed on retry.
struct RejectedAnswer {
    std::string response;
    std::string reason;
};

struct JudgeRequest {
    const ModelId& model;
    const PaperRecord& paper;
    const RenderedPrompt& prompt;
    double temperature = 0.0;
    std::chrono::milliseconds timeout{60000};
    std::vector<RejectedAnswer> rejected;
};

/// A chat-completion style model endpoint. `complete` returns the raw
/// structured answer text. Transient failures throw TransportError;
/// credential or configuration problems throw ConfigError.
class Backend {
public:
    virtual ~Backend() = default;
    virtual std::string complete(const JudgeRequest& request) = 0;
};

/// OpenAI-compatible `/chat/completions` with a json_schema response format.
class OpenAiBackend : public Backend {
public:
    OpenAiBackend(std::string base_url, std::string api_key);
    std::string complete(const JudgeRequest& request) override;

private:
    std::string base_url_;
    std::string api_key_;
};

/// Anthropic `/v1/messages`; the schema is supplied as a forced tool.
class AnthropicBackend : public Backend {
public:
    AnthropicBackend(std::string base_url, std::string api_key);
    std::string complete(const JudgeRequest& request) override;

private:
    std::string base_url_;
    std::string api_key_;
};

/// Builds the backend for a model from the environment:
///   openai:    OPENAI_API_KEY, OPENAI_BASE_URL (default https://api.openai.com/v1)
///   anthropic: ANTHROPIC_API_KEY, ANTHROPIC_BASE_URL (default https://api.anthropic.com)
///   stub:      the model name is the stub script, see stub_backend.hpp
/// Throws ConfigError for unknown providers or missing keys.
std::shared_ptr<Backend> make_backend(const ModelId& model);

}  // namespace bltrend
