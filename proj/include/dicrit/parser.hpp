#pragma once

#include "dicrit/form.hpp"

namespace dicrit {

struct ParseError : Error {
  ParseError(const std::string& what, size_t pos)
      : Error(what + " at position " + std::to_string(pos)), position(pos) {}
  size_t position;
};

/// A parsed expression num/den; den is 1 unless the text divides by a
/// non-unit (meromorphic input).  num may have degree 0 (a series).
struct ParsedValue {
  DiffForm num;
  TruncSeries den;
};

/// Grammar: integers, rationals a/b, imaginary unit i, variables
/// [a-zA-Z_][a-zA-Z0-9_]*, operators + - * / ^, parentheses, differentials
/// d<var> (dx dy dz dt dw ...), operator d(...).  Whitespace insignificant.
ParsedValue parse_value(const std::string& text, const VarSet& vars, int order);

/// Expression that must lower to a series (degree 0, denominator folded in;
/// the denominator must be a unit).
TruncSeries parse_series(const std::string& text, const VarSet& vars, int order);

/// Expression that must lower to a differential form (denominator a unit).
DiffForm parse_form(const std::string& text, const VarSet& vars, int order);

}  // namespace dicrit
