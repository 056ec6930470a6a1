#include "fqm/jordan.hpp"

#include <sstream>

#include "fqm/numth.hpp"

namespace fqm {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) { out.push_back(cur); cur.clear(); }
        else if (!std::isspace((unsigned char)c)) cur.push_back(c);
    }
    out.push_back(cur);
    return out;
}

long parse_long(const std::string& s, const std::string& ctx) {
    try {
        size_t pos = 0;
        long v = std::stol(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ValidationError("Jordan symbol: bad integer '" + s + "' in " + ctx);
    }
}

JordanComponent parse_component(const std::string& text) {
    auto caret = text.find('^');
    auto colon = text.find(':');
    if (caret == std::string::npos || colon == std::string::npos || caret > colon)
        throw ValidationError("Jordan component '" + text + "': expected p^e:<data>");
    long p = parse_long(text.substr(0, caret), text);
    long e = parse_long(text.substr(caret + 1, colon - caret - 1), text);
    std::string data = text.substr(colon + 1);
    if (e < 1) throw ValidationError("Jordan component '" + text + "': exponent must be >= 1");

    if (p == 2 && (data == "A" || data == "B"))
        return TwoEvenComponent{(int)e, data[0]};

    if (p == 2) {
        // "a=<odd>,v=<0|1>"
        auto parts = split(data, ',');
        if (parts.size() != 2 || parts[0].rfind("a=", 0) != 0 || parts[1].rfind("v=", 0) != 0)
            throw ValidationError("Jordan component '" + text + "': expected a=<odd>,v=<0|1>");
        long a = parse_long(parts[0].substr(2), text);
        long v = parse_long(parts[1].substr(2), text);
        if (a % 2 == 0) throw ValidationError("Jordan component '" + text + "': a must be odd");
        if (v != 0 && v != 1) throw ValidationError("Jordan component '" + text + "': v must be 0 or 1");
        long m = ipow(2, (int)e + 1);
        return TwoOddComponent{(int)e, mod_pos(a, m), (int)v};
    }

    if (!is_prime(p) || p % 2 == 0)
        throw ValidationError("Jordan component '" + text + "': p must be an odd prime or 2");
    if (data.rfind("a=", 0) != 0)
        throw ValidationError("Jordan component '" + text + "': expected a=<int>");
    long a = parse_long(data.substr(2), text);
    if (a % p == 0)
        throw ValidationError("Jordan component '" + text + "': gcd(a,p) must be 1");
    long q = ipow(p, (int)e);
    a = mod_pos(a, q);
    return OddComponent{p, (int)e, a};
}

} // namespace

void validate_component(const JordanComponent& c) {
    if (const auto* o = std::get_if<OddComponent>(&c)) {
        if (o->p < 3 || !is_prime(o->p) || o->e < 1 || o->a % o->p == 0 ||
            o->a < 0 || o->a >= ipow(o->p, o->e))
            throw ValidationError("invalid odd Jordan component");
    } else if (const auto* t = std::get_if<TwoOddComponent>(&c)) {
        if (t->e < 1 || t->a % 2 == 0 || (t->v != 0 && t->v != 1) ||
            t->a < 0 || t->a >= ipow(2, t->e + 1))
            throw ValidationError("invalid 2-adic odd Jordan component");
    } else if (const auto* ev = std::get_if<TwoEvenComponent>(&c)) {
        if (ev->e < 1 || (ev->kind != 'A' && ev->kind != 'B'))
            throw ValidationError("invalid 2-adic even Jordan component");
    }
}

JordanSymbol parse_jordan(const std::string& text) {
    JordanSymbol sym;
    std::string stripped;
    for (char c : text)
        if (!std::isspace((unsigned char)c)) stripped.push_back(c);
    if (stripped.empty()) return sym;  // trivial form
    for (const auto& part : split(stripped, '+')) {
        if (part.empty())
            throw ValidationError("Jordan symbol: empty component in '" + text + "'");
        sym.components.push_back(parse_component(part));
        validate_component(sym.components.back());
    }
    return sym;
}

std::string format_jordan(const JordanSymbol& symbol) {
    std::ostringstream os;
    bool first = true;
    for (const auto& c : symbol.components) {
        if (!first) os << "+";
        first = false;
        if (const auto* o = std::get_if<OddComponent>(&c))
            os << o->p << "^" << o->e << ":a=" << o->a;
        else if (const auto* t = std::get_if<TwoOddComponent>(&c))
            os << "2^" << t->e << ":a=" << t->a << ",v=" << t->v;
        else if (const auto* ev = std::get_if<TwoEvenComponent>(&c))
            os << "2^" << ev->e << ":" << ev->kind;
    }
    return os.str();
}

} // namespace fqm
