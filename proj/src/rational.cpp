#include <fraxdim/error.hpp>
#include <fraxdim/rational.hpp>

#include <cctype>
#include <functional>

namespace fraxdim {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

[[noreturn]] void bad(std::string_view text) {
    throw Error("ParseError", "not a rational number: '" + std::string(text) + "'");
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (s.empty()) bad(text);

    bool neg = false;
    if (s.front() == '+' || s.front() == '-') {
        neg = s.front() == '-';
        s.remove_prefix(1);
    }

    Rational q;
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        auto num = s.substr(0, slash), den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) bad(text);
        Integer n{std::string(num)}, d{std::string(den)};
        if (d == 0) throw Error("ParseError", "zero denominator in '" + std::string(text) + "'");
        q = Rational(n, d);
    } else {
        long exp10 = 0;
        if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
            auto ex = s.substr(e + 1);
            bool eneg = false;
            if (!ex.empty() && (ex.front() == '+' || ex.front() == '-')) {
                eneg = ex.front() == '-';
                ex.remove_prefix(1);
            }
            if (!all_digits(ex) || ex.size() > 6) bad(text);
            exp10 = std::stol(std::string(ex));
            if (eneg) exp10 = -exp10;
            s = s.substr(0, e);
        }
        std::string digits;
        if (auto dot = s.find('.'); dot != std::string_view::npos) {
            auto ip = s.substr(0, dot), fp = s.substr(dot + 1);
            if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) ||
                (!fp.empty() && !all_digits(fp)))
                bad(text);
            digits = std::string(ip) + std::string(fp);
            exp10 -= static_cast<long>(fp.size());
        } else {
            if (!all_digits(s)) bad(text);
            digits = std::string(s);
        }
        if (digits.empty()) digits = "0";
        Integer n(digits), p10;
        mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
        q = exp10 < 0 ? Rational(n, p10) : Rational(n * p10);
    }
    q.canonicalize();
    return neg ? Rational(-q) : q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

std::size_t hash_value(const Integer& z) noexcept {
    std::size_t h = std::hash<int>{}(mpz_sgn(z.get_mpz_t()));
    std::size_t n = mpz_size(z.get_mpz_t());
    for (std::size_t i = 0; i < n; ++i)
        hash_combine(h, std::hash<mp_limb_t>{}(mpz_getlimbn(z.get_mpz_t(), static_cast<mp_size_t>(i))));
    return h;
}

std::size_t hash_value(const Rational& q) noexcept {
    std::size_t h = hash_value(q.get_num());
    hash_combine(h, hash_value(q.get_den()));
    return h;
}

}  // namespace fraxdim
