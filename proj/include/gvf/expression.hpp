#pragma once

#include <string_view>

namespace gvf {

/// Folds a constant arithmetic expression: numbers, the constants pi and e,
/// + - * /, unary minus and parentheses. Throws InvalidArgument on malformed
/// input or a non-finite result.
double evaluate_expression(std::string_view text);

}  // namespace gvf
