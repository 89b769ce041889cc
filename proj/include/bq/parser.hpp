#pragma once

#include <string_view>

#include "bq/theory.hpp"

namespace bq {

/// Parses the `.bq` text format into an (ungrounded) theory.
///
///   domain floor = 1..2.            domain colour = {red, green}.
///   fluent on(floor).               action up(floor).
///   initially {on(1), -opened} | {on(2), -opened}.
///   up(N) causes current(N), -on(N), opened : 1.0 if on(N), -opened.
///   current(N) if -current(M), N != M.
///   executable up(N) if current(M), M < N.
///   goal -on(1), -on(2).   horizon 2.   discount 0.9.
///
/// `%` starts a comment. Upper-case identifiers are variables. Throws
/// ParseError with the offending position.
ActionTheory parse_theory(std::string_view source);

}  // namespace bq
