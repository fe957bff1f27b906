#pragma once

// Precision ladder: try long double first, then MPFR at increasing precision
// until the callee reports that its running error bound is good enough.

#include "bookie/multiprecision.hpp"

#include <optional>
#include <utility>

namespace bookie::detail {

// `fn` is a generic callable `fn.template operator()<R>(bool last)` returning
// std::optional<T>; an empty optional asks for more precision. The final rung
// is called with last = true and must return a value.
template <class Fn>
auto with_adaptive_precision(const Fn& fn) {
  if (auto r = fn.template operator()<long double>(false)) return std::move(*r);
  if (auto r = fn.template operator()<MpFloat<40>>(false)) return std::move(*r);
  if (auto r = fn.template operator()<MpFloat<80>>(false)) return std::move(*r);
  if (auto r = fn.template operator()<MpFloat<160>>(false)) return std::move(*r);
  if (auto r = fn.template operator()<MpFloat<320>>(false)) return std::move(*r);
  if (auto r = fn.template operator()<MpFloat<640>>(false)) return std::move(*r);
  return std::move(*fn.template operator()<MpFloat<1280>>(true));
}

}  // namespace bookie::detail
