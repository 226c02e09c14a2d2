#include "tsq/errors.hpp"

#include <string>

namespace tsq {

MomentDoesNotExist::MomentDoesNotExist(int order, double q)
    : DomainError("moment of order " + std::to_string(order) + " diverges for q = " +
                  std::to_string(q) + " (requires q > " + std::to_string(order) + "/" +
                  std::to_string(order + 1) + ")"),
      order_(order) {}

MalformedInput::MalformedInput(std::size_t line, const std::string& what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
      line_(line) {}

}  // namespace tsq
