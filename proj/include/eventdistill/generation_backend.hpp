#pragma once
// Text-generation backends: a JSON-over-HTTP completion client and a
// deterministic scripted stand-in used for tests and replays.
//
// Completion wire protocol:
//   request  {"model","prompt","top_k","top_p","max_new_tokens","temperature"}
//   response {"text"}
// The chat adapter instead sends {"model","messages":[{"role":"user",...}],
// "top_k","top_p","max_tokens","temperature"} and reads
// choices[0].message.content.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "httplib.h"
#include "json.hpp"

#include "eventdistill/error.hpp"
#include "eventdistill/io.hpp"
#include "eventdistill/prompt_forge.hpp"
#include "eventdistill/text.hpp"

namespace eventdistill {

inline constexpr const char* kApiKeyEnv = "EVENTDISTILL_API_KEY";

struct SamplingParams {
  int top_k = 50;
  double top_p = 0.95;
  int max_new_tokens = 32;
  double temperature = 1.0;

  void validate() const {
    if (top_k < 1) throw UsageError("top_k must be positive");
    if (!(top_p > 0.0 && top_p <= 1.0)) throw UsageError("top_p must lie in (0, 1]");
    if (max_new_tokens < 1) throw UsageError("max_new_tokens must be positive");
    if (!(temperature >= 0.0)) throw UsageError("temperature must be nonnegative");
  }

  bool operator==(const SamplingParams&) const = default;
};

inline json to_json(const SamplingParams& p) {
  return {{"top_k", p.top_k}, {"top_p", p.top_p}, {"max_new_tokens", p.max_new_tokens}, {"temperature", p.temperature}};
}

inline SamplingParams sampling_from_json(const json& j) {
  SamplingParams p;
  p.top_k = j.value("top_k", p.top_k);
  p.top_p = j.value("top_p", p.top_p);
  p.max_new_tokens = j.value("max_new_tokens", p.max_new_tokens);
  p.temperature = j.value("temperature", p.temperature);
  return p;
}

// Scripted responses. Lookup order per call: exact match on the prompt's
// final question, then the next unused list entry, then the fallback.
struct Script {
  std::vector<std::string> responses;
  std::map<std::string, std::string> by_question;
  std::optional<std::string> fallback;

  bool empty() const { return responses.empty() && by_question.empty() && !fallback; }

  static Script always(std::string response) {
    Script s;
    s.fallback = std::move(response);
    return s;
  }

  /// Script file: one response per line; "question<TAB>response" lines key a
  /// response on the final question; "*<TAB>response" sets the fallback.
  static Script parse(std::string_view text) {
    Script s;
    auto lines = split(text, '\n');
    if (!lines.empty() && lines.back().empty()) lines.pop_back();
    for (auto& line : lines) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      auto tab = line.find('\t');
      if (tab == std::string::npos) {
        s.responses.push_back(line);
      } else if (line.compare(0, tab, "*") == 0) {
        s.fallback = line.substr(tab + 1);
      } else {
        s.by_question[line.substr(0, tab)] = line.substr(tab + 1);
      }
    }
    return s;
  }

  static Script load(const std::filesystem::path& path) { return parse(read_file(path)); }

  /// Replays a transcript file's completions in recorded order.
  static Script from_transcript(const std::filesystem::path& path) {
    Script s;
    for (const auto& rec : parse_json_lines(read_file(path))) s.responses.push_back(required_field<std::string>(rec, "text"));
    return s;
  }
};

enum class BackendKind { http, scripted };
enum class WireProtocol { completion, chat };

struct BackendConfig {
  BackendKind kind = BackendKind::scripted;
  std::string endpoint_url;
  std::string model_name;
  WireProtocol protocol = WireProtocol::completion;
  double timeout_seconds = 60.0;
  int max_retries_transport = 2;
  int backoff_initial_ms = 500;
  std::optional<Script> script;

  void validate() const {
    if (kind == BackendKind::http && endpoint_url.empty()) {
      throw UsageError("http backend requires an endpoint URL");
    }
    if (kind == BackendKind::scripted && !script) throw UsageError("scripted backend requires a script");
    if (max_retries_transport < 0) throw UsageError("transport retries must be nonnegative");
    if (!(timeout_seconds > 0)) throw UsageError("timeout must be positive");
  }
};

struct Completion {
  std::string text;
  double latency_ms = 0;
  std::string backend_id;
};

class Backend {
 public:
  virtual ~Backend() = default;
  virtual Completion complete(const PromptText& prompt, const SamplingParams& params) = 0;
  virtual std::string id() const = 0;
};

class ScriptedBackend final : public Backend {
 public:
  explicit ScriptedBackend(Script script, std::string id = "scripted") : script_(std::move(script)), id_(std::move(id)) {}

  Completion complete(const PromptText& prompt, const SamplingParams&) override {
    std::lock_guard lock(mu_);
    if (auto it = script_.by_question.find(final_question(prompt.text)); it != script_.by_question.end()) {
      return {it->second, 0.0, id_};
    }
    if (next_ < script_.responses.size()) return {script_.responses[next_++], 0.0, id_};
    if (script_.fallback) return {*script_.fallback, 0.0, id_};
    throw BackendError(BackendError::Kind::script_exhausted,
                       "scripted backend exhausted after " + std::to_string(next_) + " responses");
  }

  std::string id() const override { return id_; }

 private:
  std::mutex mu_;
  Script script_;
  std::size_t next_ = 0;
  std::string id_;
};

namespace detail {

struct ParsedUrl {
  std::string scheme_host_port;
  std::string path;
};

inline ParsedUrl parse_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw UsageError("endpoint URL needs a scheme: " + url);
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace detail

inline json completion_request_body(const PromptText& prompt, const SamplingParams& params, const std::string& model,
                                    WireProtocol protocol = WireProtocol::completion) {
  if (protocol == WireProtocol::chat) {
    return {{"model", model},
            {"messages", json::array({{{"role", "user"}, {"content", prompt.text}}})},
            {"top_k", params.top_k},
            {"top_p", params.top_p},
            {"max_tokens", params.max_new_tokens},
            {"temperature", params.temperature}};
  }
  return {{"model", model},
          {"prompt", prompt.text},
          {"top_k", params.top_k},
          {"top_p", params.top_p},
          {"max_new_tokens", params.max_new_tokens},
          {"temperature", params.temperature}};
}

/// Pulls the continuation text out of a response body and strips a leading
/// echo of the prompt.
inline std::string parse_completion_response(std::string_view body, const std::string& prompt,
                                             WireProtocol protocol = WireProtocol::completion) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::parse_error&) {
    throw BackendError(BackendError::Kind::malformed_response, "response body is not JSON");
  }
  std::string text;
  try {
    if (protocol == WireProtocol::chat) {
      text = j.at("choices").at(0).at("message").at("content").get<std::string>();
    } else {
      text = j.at("text").get<std::string>();
    }
  } catch (const json::exception&) {
    throw BackendError(BackendError::Kind::malformed_response, "response lacks a text field");
  }
  if (!prompt.empty() && text.compare(0, prompt.size(), prompt) == 0) text.erase(0, prompt.size());
  return text;
}

class HttpBackend final : public Backend {
 public:
  explicit HttpBackend(BackendConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    url_ = detail::parse_url(cfg_.endpoint_url);
    if (const char* key = std::getenv(kApiKeyEnv); key && *key) api_key_ = key;
  }

  Completion complete(const PromptText& prompt, const SamplingParams& params) override {
    const auto body = completion_request_body(prompt, params, cfg_.model_name, cfg_.protocol).dump();
    const auto start = std::chrono::steady_clock::now();
    int delay_ms = cfg_.backoff_initial_ms;
    std::string last_error;
    BackendError::Kind last_kind = BackendError::Kind::transport;

    for (int attempt = 0; attempt <= cfg_.max_retries_transport; ++attempt) {
      if (attempt > 0) {
        std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
        delay_ms *= 2;
      }
      httplib::Client client(url_.scheme_host_port);
      auto secs = static_cast<time_t>(cfg_.timeout_seconds);
      auto usecs = static_cast<time_t>((cfg_.timeout_seconds - static_cast<double>(secs)) * 1e6);
      client.set_connection_timeout(secs, usecs);
      client.set_read_timeout(secs, usecs);
      client.set_write_timeout(secs, usecs);
      httplib::Headers headers;
      if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

      const auto call_start = std::chrono::steady_clock::now();
      auto res = client.Post(url_.path, headers, body, "application/json");
      if (!res) {
        double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - call_start).count();
        bool timed_out = res.error() == httplib::Error::ConnectionTimeout ||
                         (res.error() == httplib::Error::Read && elapsed >= cfg_.timeout_seconds * 0.9);
        last_kind = timed_out ? BackendError::Kind::timeout : BackendError::Kind::transport;
        last_error = httplib::to_string(res.error());
        continue;
      }
      if (res->status == 429 || res->status >= 500) {
        last_kind = BackendError::Kind::transport;
        last_error = "HTTP " + std::to_string(res->status);
        continue;
      }
      if (res->status != 200) {
        throw BackendError(BackendError::Kind::transport, "HTTP " + std::to_string(res->status) + " from " + cfg_.endpoint_url);
      }
      Completion c;
      c.text = parse_completion_response(res->body, prompt.text, cfg_.protocol);
      c.latency_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      c.backend_id = id();
      return c;
    }
    throw BackendError(last_kind, "request to " + cfg_.endpoint_url + " failed after " +
                                      std::to_string(cfg_.max_retries_transport + 1) + " attempts: " + last_error);
  }

  std::string id() const override { return "http:" + (cfg_.model_name.empty() ? cfg_.endpoint_url : cfg_.model_name); }

 private:
  BackendConfig cfg_;
  detail::ParsedUrl url_;
  std::string api_key_;
};

inline std::unique_ptr<Backend> make_backend(const BackendConfig& cfg) {
  cfg.validate();
  if (cfg.kind == BackendKind::http) return std::make_unique<HttpBackend>(cfg);
  return std::make_unique<ScriptedBackend>(*cfg.script, cfg.model_name.empty() ? "scripted" : "scripted:" + cfg.model_name);
}

/// Decorator that records every prompt/completion pair as a line record. The
/// resulting file replays through Script::from_transcript.
class TranscriptRecorder final : public Backend {
 public:
  explicit TranscriptRecorder(Backend& inner) : inner_(inner) {}

  Completion complete(const PromptText& prompt, const SamplingParams& params) override {
    auto c = inner_.complete(prompt, params);
    json rec = {{"prompt", prompt.text},
                {"kind", std::string(to_string(prompt.kind))},
                {"text", c.text},
                {"backend_id", c.backend_id},
                {"latency_ms", c.latency_ms}};
    std::lock_guard lock(mu_);
    lines_.append(rec.dump()).push_back('\n');
    return c;
  }

  std::string id() const override { return inner_.id(); }

  std::string transcript() const {
    std::lock_guard lock(mu_);
    return lines_;
  }

 private:
  Backend& inner_;
  mutable std::mutex mu_;
  std::string lines_;
};

enum class Verdict { yes, no, unparseable };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::yes: return "yes";
    case Verdict::no: return "no";
    case Verdict::unparseable: return "unparseable";
  }
  return "unparseable";
}

inline std::optional<Verdict> parse_verdict(std::string_view s) {
  if (s == "yes") return Verdict::yes;
  if (s == "no") return Verdict::no;
  if (s == "unparseable") return Verdict::unparseable;
  return std::nullopt;
}

struct YesNo {
  Verdict verdict;
  std::string justification;
};

/// Scans the words of the first sentence for YES or NO (case-insensitive);
/// whatever follows the first period is the justification.
inline YesNo parse_yes_no(const Completion& completion) {
  std::string_view text = completion.text;
  auto first = text.find_first_not_of(" \t\r\n");
  text.remove_prefix(first == std::string_view::npos ? text.size() : first);
  auto stop = text.find_first_of(".\n");
  auto head = text.substr(0, stop == std::string_view::npos ? text.size() : stop);

  Verdict verdict = Verdict::unparseable;
  std::size_t i = 0;
  while (i < head.size()) {
    while (i < head.size() && !std::isalpha(static_cast<unsigned char>(head[i]))) ++i;
    std::size_t j = i;
    while (j < head.size() && std::isalpha(static_cast<unsigned char>(head[j]))) ++j;
    std::string word;
    for (std::size_t k = i; k < j; ++k) word.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(head[k]))));
    if (word == "YES") {
      verdict = Verdict::yes;
      break;
    }
    if (word == "NO") {
      verdict = Verdict::no;
      break;
    }
    i = j;
  }

  std::string justification;
  if (auto period = text.find('.'); period != std::string_view::npos) justification = trim(text.substr(period + 1));
  return {verdict, std::move(justification)};
}

}  // namespace eventdistill
