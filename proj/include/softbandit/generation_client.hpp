#pragma once

#include <chrono>
#include <string>
#include <string_view>

#include "softbandit/projection.hpp"

namespace softbandit {

// JSON body for POST /generate:
//   {"soft_prompt": [[...token_dim...] x num_tokens], "instruction", "input"}
std::string build_generate_request(const SoftPrompt& prompt, std::size_t num_tokens,
                                   std::string_view instruction,
                                   std::string_view input_text);

// Extracts "text" from a response body. Throws ServiceError
// (MalformedResponse) when absent or not a string.
std::string parse_generate_response(std::string_view body);

// Blocking client for a soft-prompt generation service. The endpoint is
// "http://host:port" with an optional path prefix.
class GenerationClient {
 public:
  GenerationClient(std::string endpoint, std::chrono::milliseconds timeout);

  // Throws ServiceError with a kind distinguishing connection failure,
  // timeout, malformed response and non-2xx status.
  std::string generate(const SoftPrompt& prompt, std::size_t num_tokens,
                       std::string_view instruction,
                       std::string_view input_text) const;

  const std::string& endpoint() const { return endpoint_; }

 private:
  std::string endpoint_;
  std::string scheme_host_port_;
  std::string path_;
  std::chrono::milliseconds timeout_;
};

std::string remote_generate(const std::string& endpoint, const SoftPrompt& prompt,
                            std::size_t num_tokens, std::string_view instruction,
                            std::string_view input_text,
                            std::chrono::milliseconds timeout);

}  // namespace softbandit
