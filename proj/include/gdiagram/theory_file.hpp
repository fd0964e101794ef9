#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gdiagram/intension.hpp"
#include "gdiagram/model.hpp"

namespace gdiag {

struct LoadedTheory {
  Theory theory;
  IntensionalDecls intension;
  std::vector<Diagnostic> diagnostics;
};

/// Parses theory text. One clause per line, `#` starts a comment:
///
///   theory NAME
///   sort NAME...
///   const NAME... : SORT [constructor]
///   func NAME : SORT, ... -> SORT [constructor]
///   pred NAME : SORT, ... [default false|unknown]
///   fact ATOM = true|false|unknown [at WORLD TIME]
///   rule ATOM = VALUE [when T = T (and T = T)* (or T = T (and T = T)*)*]
///   equal TERM TERM
///   axiom FORMULA
///   family NAME = INDEX:PRED ...
///   worlds NAME...            times NAME...
///   entity NAME...            concept NAME = WORLD:ENTITY ...
///   conceptset NAME = CONCEPT[?] ...
///   property PRED = WORLD:SET ...
///   meaning SYMBOL = CONCEPT|ENTITY
///
/// In rules, identifiers that are not declared symbols are variables; their
/// sorts come from the positions they occupy. Errors are ParseError with the
/// line and column in `text`.
LoadedTheory parse_theory(std::string_view text, const std::string& default_name = "theory");

LoadedTheory load_theory_file(const std::string& path);

}  // namespace gdiag
