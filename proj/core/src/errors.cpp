#include "agora/errors.hpp"

#include "agora/transcript.hpp"

namespace agora {

namespace {

std::string join_rules(const std::vector<std::string>& rules) {
  std::string out = "strategy violates:";
  for (const auto& r : rules) {
    out += ' ';
    out += r;
  }
  return out;
}

}  // namespace

SyntaxError::SyntaxError(std::size_t offset, const std::string& what)
    : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

ConstraintViolation::ConstraintViolation(std::vector<std::string> rules)
    : Error(join_rules(rules)), rules_(std::move(rules)) {}

SchemaError::SchemaError(std::string pointer, const std::string& what)
    : Error((pointer.empty() ? std::string("/") : pointer) + ": " + what),
      pointer_(std::move(pointer)) {}

void RunError::attach_partial(const Transcript& transcript) {
  partial_ = std::make_shared<const Transcript>(transcript);
}

}  // namespace agora
