#pragma once

#include <gmpxx.h>
#include <string>
#include <string_view>

namespace symtan {

// Exact arithmetic types used throughout the algebraic modules. Floating
// point enters only at evaluation time.
using Int = mpz_class;
using Rat = mpq_class;

inline double to_double(const Rat& q) { return q.get_d(); }

inline Rat rat(long num, long den = 1) { return Rat(num, den); }

// Parses "p", "-p" or "p/q" (q > 0 after canonicalization).
Rat rat_from_string(std::string_view s);

// Lowest-terms text form: "p" or "p/q".
std::string rat_to_string(const Rat& q);

}  // namespace symtan
