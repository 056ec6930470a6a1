#pragma once

#include <string>
#include <variant>
#include <vector>

#include "fqm/errors.hpp"

namespace fqm {

// Jordan components. Parameters are residue data and get reduced on
// construction: a mod p^e for odd p, a mod 2^{e+1} for the 2-adic odd blocks.
struct OddComponent {
    long p;   // odd prime
    int e;    // exponent, block is Z_{p^e}
    long a;   // gcd(a, p) = 1, pairing (g,g) = a / p^e
};

struct TwoOddComponent {
    int e;    // block is Z_{2^e}
    long a;   // odd, (g,g) = a / 2^e, Q(g) = (a + v 2^e) / 2^{e+1}
    int v;    // 0 or 1
};

struct TwoEvenComponent {
    int e;      // block is Z_{2^e} x Z_{2^e}
    char kind;  // 'A' (x = 0) or 'B' (x = 2)
};

using JordanComponent = std::variant<OddComponent, TwoOddComponent, TwoEvenComponent>;

struct JordanSymbol {
    std::vector<JordanComponent> components;
};

// Text grammar: components joined by '+'.
//   odd     "p^e:a=<int>"
//   2-odd   "2^e:a=<odd>,v=<0|1>"
//   2-even  "2^e:A" or "2^e:B"
JordanSymbol parse_jordan(const std::string& text);
std::string format_jordan(const JordanSymbol& symbol);

void validate_component(const JordanComponent& c);

} // namespace fqm
