#include "softbandit/generation_client.hpp"

#include <httplib.h>

#include <json.hpp>

#include "softbandit/errors.hpp"

namespace softbandit {

std::string build_generate_request(const SoftPrompt& prompt, std::size_t num_tokens,
                                   std::string_view instruction, std::string_view input_text) {
  nlohmann::ordered_json body;
  body["soft_prompt"] = prompt.token_rows(num_tokens);
  body["instruction"] = std::string(instruction);
  body["input"] = std::string(input_text);
  return body.dump();
}

std::string parse_generate_response(std::string_view body) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw ServiceError(ServiceErrorKind::MalformedResponse,
                       std::string("generation service returned invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ServiceError(ServiceErrorKind::MalformedResponse,
                       "generation service response is not an object");
  }
  const auto it = doc.find("text");
  if (it == doc.end() || !it->is_string()) {
    throw ServiceError(ServiceErrorKind::MalformedResponse,
                       "generation service response lacks a string \"text\" field");
  }
  return it->get<std::string>();
}

GenerationClient::GenerationClient(std::string endpoint, std::chrono::milliseconds timeout)
    : endpoint_(std::move(endpoint)), timeout_(timeout) {
  // Split "scheme://host:port/prefix" into the connection part and the prefix.
  const auto scheme_end = endpoint_.find("://");
  const auto host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
  const auto slash = endpoint_.find('/', host_start);
  scheme_host_port_ = endpoint_.substr(0, slash);
  std::string prefix = slash == std::string::npos ? "" : endpoint_.substr(slash);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  path_ = prefix + "/generate";
}

std::string GenerationClient::generate(const SoftPrompt& prompt, std::size_t num_tokens,
                                       std::string_view instruction,
                                       std::string_view input_text) const {
  const std::string body = build_generate_request(prompt, num_tokens, instruction, input_text);

  httplib::Client client(scheme_host_port_);
  if (!client.is_valid()) {
    throw ServiceError(ServiceErrorKind::Connection,
                       "invalid generation service endpoint: " + endpoint_);
  }
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  const auto started = std::chrono::steady_clock::now();
  auto res = client.Post(path_, body, "application/json");
  if (!res) {
    const auto err = res.error();
    const auto elapsed = std::chrono::steady_clock::now() - started;
    // httplib reports an expired read timeout as a plain read error.
    const bool timed_out =
        err == httplib::Error::ConnectionTimeout ||
        ((err == httplib::Error::Read || err == httplib::Error::Write) && elapsed >= timeout_);
    throw ServiceError(timed_out ? ServiceErrorKind::Timeout : ServiceErrorKind::Connection,
                       "generation service " + endpoint_ + ": " + httplib::to_string(err));
  }
  if (res->status < 200 || res->status >= 300) {
    throw ServiceError(ServiceErrorKind::Status,
                       "generation service " + endpoint_ + " returned status " +
                           std::to_string(res->status),
                       res->status);
  }
  return parse_generate_response(res->body);
}

std::string remote_generate(const std::string& endpoint, const SoftPrompt& prompt,
                            std::size_t num_tokens, std::string_view instruction,
                            std::string_view input_text, std::chrono::milliseconds timeout) {
  return GenerationClient(endpoint, timeout).generate(prompt, num_tokens, instruction, input_text);
}

}  // namespace softbandit
