#if defined(DAGPLAN_WITH_TLS)
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

#include <cstdlib>
#include <regex>

#include "dagplan/backend.hpp"
#include "dagplan/errors.hpp"

namespace dagplan {

namespace {

struct ParsedUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

ParsedUrl split_url(const std::string& url) {
  static const std::regex pattern(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, pattern)) throw ConfigError("invalid backend endpoint '" + url + "'");
  return {m[1].str(), m[2].matched ? m[2].str() : "/"};
}

}  // namespace

RemoteChatBackend::RemoteChatBackend(RemoteChatSettings settings) : settings_(std::move(settings)) {
  split_url(settings_.endpoint);
  if (settings_.model.empty()) throw ConfigError("remote backend needs a model name");
  if (!settings_.api_key_env.empty()) {
    const char* key = std::getenv(settings_.api_key_env.c_str());
    if (key == nullptr || *key == '\0') {
      throw ConfigError("credential variable " + settings_.api_key_env + " is not set");
    }
    api_key_ = key;
  }
#if !defined(DAGPLAN_WITH_TLS)
  if (settings_.endpoint.rfind("https://", 0) == 0) {
    throw ConfigError("built without TLS support; cannot reach " + settings_.endpoint);
  }
#endif
}

nlohmann::json RemoteChatBackend::request_body(std::string_view prompt) const {
  return {{"model", settings_.model},
          {"temperature", settings_.temperature},
          {"messages", nlohmann::json::array({{{"role", "user"}, {"content", std::string(prompt)}}})}};
}

Completion RemoteChatBackend::parse_response(const nlohmann::json& body, std::string_view prompt) {
  try {
    Completion c;
    const auto& content = body.at("choices").at(0).at("message").at("content");
    c.text = content.is_null() ? std::string{} : content.get<std::string>();
    if (body.contains("usage") && body.at("usage").is_object()) {
      const auto& usage = body.at("usage");
      c.usage.prompt_tokens = usage.value("prompt_tokens", count_tokens(prompt));
      c.usage.output_tokens = usage.value("completion_tokens", count_tokens(c.text));
    } else {
      c.usage = {count_tokens(prompt), count_tokens(c.text)};
    }
    if (c.usage.prompt_tokens < 0 || c.usage.output_tokens < 0) {
      throw BackendError("negative token usage in chat-completions response");
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw BackendError(std::string("unexpected chat-completions response: ") + e.what());
  }
}

Completion RemoteChatBackend::complete(Role, std::string_view prompt) {
  const auto url = split_url(settings_.endpoint);
  httplib::Client client(url.origin);
  client.set_connection_timeout(settings_.timeout_seconds, 0);
  client.set_read_timeout(settings_.timeout_seconds, 0);
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

  auto res = client.Post(url.path, headers, request_body(prompt).dump(), "application/json");
  if (!res) {
    throw BackendError("chat-completions request failed: " + httplib::to_string(res.error()));
  }
  if (res->status < 200 || res->status >= 300) {
    throw BackendError("chat-completions returned HTTP " + std::to_string(res->status) + ": " +
                       res->body.substr(0, 300));
  }
  nlohmann::json body;
  try {
    body = nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::exception& e) {
    throw BackendError(std::string("chat-completions body is not JSON: ") + e.what());
  }
  return parse_response(body, prompt);
}

}  // namespace dagplan
