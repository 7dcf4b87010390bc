#include "entroscope/rational.hpp"

#include <cctype>
#include <ostream>

namespace entroscope {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace

std::optional<Rational> Rational::parse(std::string_view text) {
    // strip surrounding whitespace
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) return std::nullopt;

    bool negative = false;
    if (text.front() == '+' || text.front() == '-') {
        negative = text.front() == '-';
        text.remove_prefix(1);
        if (text.empty()) return std::nullopt;
    }

    const auto slash = text.find('/');
    Rational value;
    if (slash != std::string_view::npos) {
        const std::string_view num = text.substr(0, slash);
        const std::string_view den = text.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) return std::nullopt;
        Integer d(std::string(den), 10);
        if (d == 0) return std::nullopt;
        value = Rational(Integer(std::string(num), 10), std::move(d));
    } else {
        const auto dot = text.find('.');
        if (dot == std::string_view::npos) {
            if (!all_digits(text)) return std::nullopt;
            value = Rational(Integer(std::string(text), 10), Integer(1));
        } else {
            const std::string_view whole = text.substr(0, dot);
            const std::string_view frac = text.substr(dot + 1);
            if ((whole.empty() && frac.empty()) ||
                (!whole.empty() && !all_digits(whole)) ||
                (!frac.empty() && !all_digits(frac)))
                return std::nullopt;
            Integer scale(1);
            for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
            Integer digits(std::string(whole) + std::string(frac), 10);
            value = Rational(std::move(digits), std::move(scale));
        }
    }
    return negative ? -value : value;
}

std::string Rational::str() const {
    if (is_integer()) return numerator().get_str();
    return numerator().get_str() + "/" + denominator().get_str();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

std::ostream& operator<<(std::ostream& os, const Interval& iv) {
    return os << "[" << iv.lo << ", " << iv.hi << "]";
}

}  // namespace entroscope
