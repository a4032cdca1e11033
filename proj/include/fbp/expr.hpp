#pragma once

#include <functional>
#include <string>

#include "fbp/grid.hpp"

namespace fbp {

/// Compiles an expression in x and y. Grammar (docs/config.md):
///   expr    = term { ("+" | "-") term }
///   term    = unary { ("*" | "/") unary }
///   unary   = "-" unary | power
///   power   = primary [ "^" unary ]
///   primary = number | "x" | "y" | "r" | "pi" | func "(" expr { "," expr } ")"
///           | "(" expr ")" | "|" expr "|"
/// with func one of sin, cos, atan2, sqrt, exp, log, abs, min, max.
/// r is |(x, y)|. Throws CONFIG_INVALID with the offending position.
std::function<double(Point)> compile_expression(const std::string& text);

}  // namespace fbp
