#include "smcensus/bigfloat.hpp"
#include "smcensus/bignum.hpp"
#include "smcensus/errors.hpp"

#include <cctype>
#include <cstdlib>
#include <memory>

namespace smcensus {

BigRational parse_rational(const std::string& text) {
    if (text.empty()) throw InvalidArgument("empty rational");
    const auto slash = text.find('/');
    const auto dot = text.find('.');
    try {
        if (slash != std::string::npos) {
            BigRational q(text, 10);
            if (q.get_den() == 0) throw InvalidArgument("zero denominator in '" + text + "'");
            q.canonicalize();
            return q;
        }
        if (dot != std::string::npos) {
            std::string digits = text.substr(0, dot) + text.substr(dot + 1);
            const auto frac_len = text.size() - dot - 1;
            for (std::size_t i = 0; i < digits.size(); ++i) {
                const bool sign = i == 0 && (digits[i] == '-' || digits[i] == '+');
                if (!sign && !std::isdigit(static_cast<unsigned char>(digits[i])))
                    throw InvalidArgument("malformed decimal '" + text + "'");
            }
            if (!digits.empty() && digits[0] == '+') digits.erase(0, 1);
            BigInt num(digits, 10);
            BigInt den;
            mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_len);
            BigRational q(num, den);
            q.canonicalize();
            return q;
        }
        BigRational q(BigInt(text, 10));
        return q;
    } catch (const std::invalid_argument& e) {
        throw InvalidArgument("malformed rational '" + text + "'");
    }
}

std::string BigFloat::to_decimal(int digits, mpfr_rnd_t rnd) const {
    if (mpfr_zero_p(value_)) return "0";
    if (!mpfr_number_p(value_)) return mpfr_nan_p(value_) ? "nan" : (mpfr_sgn(value_) > 0 ? "inf" : "-inf");
    mpfr_exp_t exp = 0;
    char* raw = mpfr_get_str(nullptr, &exp, 10, static_cast<std::size_t>(digits), value_, rnd);
    std::unique_ptr<char, void (*)(char*)> guard(raw, mpfr_free_str);
    std::string mant(raw);
    std::string sign;
    if (!mant.empty() && mant[0] == '-') {
        sign = "-";
        mant.erase(0, 1);
    }
    std::string out;
    if (exp > 0 && exp <= static_cast<mpfr_exp_t>(mant.size())) {
        out = mant.substr(0, static_cast<std::size_t>(exp)) + "." + mant.substr(static_cast<std::size_t>(exp));
    } else if (exp > static_cast<mpfr_exp_t>(mant.size())) {
        out = mant + std::string(static_cast<std::size_t>(exp) - mant.size(), '0');
    } else {
        out = "0." + std::string(static_cast<std::size_t>(-exp), '0') + mant;
    }
    if (out.find('.') != std::string::npos) {
        while (!out.empty() && out.back() == '0') out.pop_back();
        if (!out.empty() && out.back() == '.') out.pop_back();
    }
    return sign + out;
}

BigFloat BigFloat::from_rational(const BigRational& q, mpfr_rnd_t rnd, mpfr_prec_t precision) {
    BigFloat r(precision);
    mpfr_set_q(r.get(), q.get_mpq_t(), rnd);
    return r;
}

BigFloat BigFloat::from_string(const std::string& decimal, mpfr_rnd_t rnd, mpfr_prec_t precision) {
    BigFloat r(precision);
    if (mpfr_set_str(r.get(), decimal.c_str(), 10, rnd) != 0)
        throw InvalidArgument("malformed decimal '" + decimal + "'");
    return r;
}

} // namespace smcensus
