#include "bltrend/backend.hpp"

#include <cstdlib>

#include "bltrend/errors.hpp"
#include "bltrend/http.hpp"
#include "bltrend/stub_backend.hpp"

namespace bltrend {

namespace {

std::string env_or(const char* name, std::string fallback) {
    const char* v = std::getenv(name);
    return (v && *v) ? std::string(v) : std::move(fallback);
}

std::string retry_instruction(const RejectedAnswer& r) {
    return "Your previous answer was rejected: " + r.reason +
           ". Reply again with a JSON object that satisfies the schema exactly.";
}

void raise_for_status(const http::Response& response, const std::string& provider) {
    if (response.status == 200) return;
    if (response.status == 401 || response.status == 403) {
        throw ConfigError(provider + " rejected the credentials (HTTP " + std::to_string(response.status) + ")");
    }
    std::string snippet = response.body.substr(0, 200);
    throw TransportError(provider + " returned HTTP " + std::to_string(response.status) + ": " + snippet);
}

json parse_body(const std::string& body, const std::string& provider) {
    json parsed = json::parse(body, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object()) {
        throw TransportError(provider + " returned a non-JSON body");
    }
    return parsed;
}

}  // namespace

ModelId ModelId::parse(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos || colon == 0 || colon + 1 == text.size()) {
        throw ConfigError("model id '" + std::string(text) + "' must look like provider:model_name");
    }
    return {std::string(text.substr(0, colon)), std::string(text.substr(colon + 1))};
}

OpenAiBackend::OpenAiBackend(std::string base_url, std::string api_key)
    : base_url_(std::move(base_url)), api_key_(std::move(api_key)) {}

std::string OpenAiBackend::complete(const JudgeRequest& request) {
    ordered_json messages = ordered_json::array();
    messages.push_back({{"role", "user"}, {"content", request.prompt.text}});
    for (const RejectedAnswer& r : request.rejected) {
        messages.push_back({{"role", "assistant"}, {"content", r.response}});
        messages.push_back({{"role", "user"}, {"content", retry_instruction(r)}});
    }
    ordered_json body;
    body["model"] = request.model.model_name;
    body["temperature"] = request.temperature;
    body["messages"] = std::move(messages);
    body["response_format"] = {
        {"type", "json_schema"},
        {"json_schema", {{"name", "BitterLessonScores"}, {"schema", request.prompt.schema}}}};

    http::Request http_request;
    http_request.method = "POST";
    http_request.url = http::join_url(base_url_, "/chat/completions");
    http_request.headers = {{"Authorization", "Bearer " + api_key_}};
    http_request.body = body.dump();
    http_request.timeout = request.timeout;

    const http::Response response = http::send(http_request);
    raise_for_status(response, "openai");
    const json parsed = parse_body(response.body, "openai");
    try {
        const json& message = parsed.at("choices").at(0).at("message");
        if (message.contains("refusal") && message["refusal"].is_string()) {
            return "refusal: " + message["refusal"].get<std::string>();
        }
        return message.at("content").get<std::string>();
    } catch (const json::exception&) {
        throw TransportError("openai response lacks choices[0].message.content");
    }
}

AnthropicBackend::AnthropicBackend(std::string base_url, std::string api_key)
    : base_url_(std::move(base_url)), api_key_(std::move(api_key)) {}

std::string AnthropicBackend::complete(const JudgeRequest& request) {
    ordered_json messages = ordered_json::array();
    messages.push_back({{"role", "user"}, {"content", request.prompt.text}});
    for (const RejectedAnswer& r : request.rejected) {
        messages.push_back({{"role", "assistant"}, {"content", r.response}});
        messages.push_back({{"role", "user"}, {"content", retry_instruction(r)}});
    }
    ordered_json tool;
    tool["name"] = "record_scores";
    tool["description"] = "Record the rubric assessment of the abstract.";
    tool["input_schema"] = request.prompt.schema;

    ordered_json body;
    body["model"] = request.model.model_name;
    body["max_tokens"] = 4096;
    body["temperature"] = request.temperature;
    body["messages"] = std::move(messages);
    body["tools"] = ordered_json::array({tool});
    body["tool_choice"] = {{"type", "tool"}, {"name", "record_scores"}};

    http::Request http_request;
    http_request.method = "POST";
    http_request.url = http::join_url(base_url_, "/v1/messages");
    http_request.headers = {{"x-api-key", api_key_}, {"anthropic-version", "2023-06-01"}};
    http_request.body = body.dump();
    http_request.timeout = request.timeout;

    const http::Response response = http::send(http_request);
    raise_for_status(response, "anthropic");
    const json parsed = parse_body(response.body, "anthropic");
    const auto content = parsed.find("content");
    if (content == parsed.end() || !content->is_array()) throw TransportError("anthropic response lacks content");
    std::string text;
    for (const json& block : *content) {
        const std::string type = block.value("type", "");
        if (type == "tool_use" && block.contains("input")) return block["input"].dump();
        if (type == "text") text += block.value("text", "");
    }
    return text;
}

std::shared_ptr<Backend> make_backend(const ModelId& model) {
    if (model.provider == "stub") return std::make_shared<StubBackend>(StubScript::parse(model.model_name));
    if (model.provider == "openai") {
        const std::string key = env_or("OPENAI_API_KEY", "");
        if (key.empty()) throw ConfigError("OPENAI_API_KEY is not set (needed for " + model.str() + ")");
        return std::make_shared<OpenAiBackend>(env_or("OPENAI_BASE_URL", "https://api.openai.com/v1"), key);
    }
    if (model.provider == "anthropic") {
        const std::string key = env_or("ANTHROPIC_API_KEY", "");
        if (key.empty()) throw ConfigError("ANTHROPIC_API_KEY is not set (needed for " + model.str() + ")");
        return std::make_shared<AnthropicBackend>(env_or("ANTHROPIC_BASE_URL", "https://api.anthropic.com"), key);
    }
    throw ConfigError("unknown provider '" + model.provider + "' in " + model.str());
}

}  // namespace bltrend
