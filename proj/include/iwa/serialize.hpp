#pragma once

// Text and JSON I/O: series expressions ("3 + 3*T + T^2" or a coefficient
// list), JSON encodings of the domain types, and the TOML loaders for
// elementary modules and scenarios.

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "iwa/akashi.hpp"
#include "iwa/errors.hpp"
#include "iwa/modules.hpp"
#include "iwa/scenario.hpp"
#include "iwa/series.hpp"
#include "iwa/toml.hpp"

namespace iwa {

namespace detail {

class SeriesTextParser {
  public:
    SeriesTextParser(std::string text, const SeriesPrecision& prec)
        : text_(std::move(text)), prec_(prec) {}

    IwasawaSeries parse() {
        Coeffs coeffs(static_cast<size_t>(prec_.degree_cap()), mpz_class(0));
        skip_spaces();
        bool first = true;
        while (pos_ < text_.size()) {
            int sign = 1;
            if (peek() == '+' || peek() == '-') {
                sign = take() == '-' ? -1 : 1;
                skip_spaces();
            } else if (!first) {
                fail("expected '+' or '-' between terms");
            }
            parse_term(coeffs, sign);
            skip_spaces();
            first = false;
        }
        if (first) fail("empty series expression");
        return IwasawaSeries(prec_, std::move(coeffs));
    }

  private:
    std::string text_;
    SeriesPrecision prec_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) {
        throw ParseError("series expression: " + what);
    }
    char peek() const { return text_[pos_]; }
    char take() { return text_[pos_++]; }
    void skip_spaces() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(peek()))) {
            ++pos_;
        }
    }

    void parse_term(Coeffs& coeffs, int sign) {
        mpz_class coeff = 1;
        bool saw_number = false;
        if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(peek()))) {
            std::string digits;
            while (pos_ < text_.size() &&
                   std::isdigit(static_cast<unsigned char>(peek()))) {
                digits.push_back(take());
            }
            coeff = mpz_class(digits);
            saw_number = true;
            skip_spaces();
            if (pos_ < text_.size() && peek() == '*') {
                take();
                skip_spaces();
            }
        }
        int exponent = 0;
        if (pos_ < text_.size() && (peek() == 'T' || peek() == 't')) {
            take();
            exponent = 1;
            skip_spaces();
            if (pos_ < text_.size() && peek() == '^') {
                take();
                skip_spaces();
                std::string digits;
                while (pos_ < text_.size() &&
                       std::isdigit(static_cast<unsigned char>(peek()))) {
                    digits.push_back(take());
                }
                if (digits.empty()) fail("missing exponent after '^'");
                exponent = std::stoi(digits);
            }
        } else if (!saw_number) {
            fail("expected a coefficient or T");
        }
        if (exponent >= prec_.degree_cap()) {
            throw DegreeCapExceeded("term T^" + std::to_string(exponent) +
                                    " does not fit below the degree cap " +
                                    std::to_string(prec_.degree_cap()));
        }
        coeffs[static_cast<size_t>(exponent)] += sign * coeff;
    }
};

}  // namespace detail

// Accepts either a polynomial expression "3 + 3*T + T^2" or a JSON-style
// coefficient list "[3, 3, 1]" (entries may be strings for big values).
inline IwasawaSeries parse_series(const std::string& text, const SeriesPrecision& prec) {
    size_t i = 0;
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i < text.size() && text[i] == '[') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("coefficient list: ") + e.what());
        }
        if (!j.is_array()) throw ParseError("coefficient list must be a JSON array");
        if (static_cast<int>(j.size()) > prec.degree_cap()) {
            throw DegreeCapExceeded("coefficient list longer than the degree cap");
        }
        detail::Coeffs coeffs;
        for (const auto& entry : j) {
            if (entry.is_number_integer()) {
                coeffs.emplace_back(static_cast<long>(entry.get<long long>()));
            } else if (entry.is_string()) {
                try {
                    coeffs.emplace_back(mpz_class(entry.get<std::string>()));
                } catch (const std::invalid_argument&) {
                    throw ParseError("bad integer literal in coefficient list");
                }
            } else {
                throw ParseError("coefficients must be integers or decimal strings");
            }
        }
        return IwasawaSeries(prec, std::move(coeffs));
    }
    return detail::SeriesTextParser(text, prec).parse();
}

inline std::string series_to_string(const IwasawaSeries& f) {
    if (f.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i <= f.degree(); ++i) {
        const mpz_class& c = f.coeff(i);
        if (c == 0) continue;
        if (!first) os << " + ";
        if (i == 0) {
            os << c.get_str();
        } else {
            if (c != 1) os << c.get_str() << "*";
            os << "T";
            if (i > 1) os << "^" << i;
        }
        first = false;
    }
    return os.str();
}

inline nlohmann::json to_json(const PadicInt& a) {
    return nlohmann::json{{"p", a.prime()},
                          {"precision", a.precision()},
                          {"residue", a.residue().get_str()}};
}

inline PadicInt padic_from_json(const nlohmann::json& j) {
    return PadicInt(j.at("p").get<long>(), j.at("precision").get<int>(),
                    mpz_class(j.at("residue").get<std::string>()));
}

inline nlohmann::json to_json(const IwasawaSeries& f) {
    nlohmann::json coeffs = nlohmann::json::array();
    for (const auto& c : f.poly()) coeffs.push_back(c.get_str());
    return nlohmann::json{{"p", f.precision().prime()},
                          {"coeff_precision", f.precision().coeff_precision()},
                          {"degree_cap", f.precision().degree_cap()},
                          {"coeffs", coeffs}};
}

inline IwasawaSeries series_from_json(const nlohmann::json& j) {
    SeriesPrecision prec(j.at("p").get<long>(), j.at("coeff_precision").get<int>(),
                         j.at("degree_cap").get<int>());
    detail::Coeffs coeffs;
    for (const auto& entry : j.at("coeffs")) {
        coeffs.emplace_back(mpz_class(entry.get<std::string>()));
    }
    return IwasawaSeries(prec, std::move(coeffs));
}

inline nlohmann::json to_json(const FractionElement& x) {
    return nlohmann::json{{"num", to_json(x.num())},
                          {"den", to_json(x.den())},
                          {"normalized_mod_units", x.normalized_mod_units()}};
}

inline FractionElement fraction_from_json(const nlohmann::json& j) {
    return FractionElement(series_from_json(j.at("num")), series_from_json(j.at("den")),
                           j.at("normalized_mod_units").get<bool>());
}

// --- TOML loaders -------------------------------------------------------

inline ElementaryModule module_from_toml(const toml::Table& t, const SeriesPrecision& prec) {
    std::vector<int> p_part;
    if (const toml::Value* v = toml::find(t, "p_part")) {
        for (const auto& e : v->as_array()) {
            p_part.push_back(static_cast<int>(e.as_integer()));
        }
    }
    std::vector<PolyFactor> poly_part;
    if (const toml::Value* v = toml::find(t, "poly_part")) {
        for (const auto& e : v->as_array()) {
            const toml::Table& fac = e.as_table();
            int beta = 1;
            if (const toml::Value* b = toml::find(fac, "beta")) {
                beta = static_cast<int>(b->as_integer());
            }
            const std::string& kind = toml::require(fac, "kind").as_string();
            if (kind == "cyclotomic") {
                int i = static_cast<int>(toml::require(fac, "i").as_integer());
                poly_part.push_back(PolyFactor{cyclotomic_gamma(prec.prime(), i, prec), beta});
            } else if (kind == "coeffs") {
                detail::Coeffs coeffs;
                for (const auto& c : toml::require(fac, "coeffs").as_array()) {
                    coeffs.emplace_back(static_cast<long>(c.as_integer()));
                }
                poly_part.push_back(PolyFactor{IwasawaSeries(prec, std::move(coeffs)), beta});
            } else {
                throw ParseError("unknown factor kind '" + kind + "'");
            }
        }
    }
    return ElementaryModule(prec, std::move(p_part), std::move(poly_part));
}

inline ReductionKind reduction_kind_from_string(const std::string& s) {
    if (s == "good_ordinary") return ReductionKind::GoodOrdinary;
    if (s == "split_mult") return ReductionKind::SplitMult;
    if (s == "nonsplit_mult") return ReductionKind::NonSplitMult;
    throw ParseError("unknown reduction kind '" + s + "'");
}

inline Scenario scenario_from_toml(const toml::Table& t) {
    Scenario scn;
    scn.p = toml::require(t, "p").as_integer();
    if (const toml::Value* v = toml::find(t, "curve")) scn.curve_label = v->as_string();
    if (const toml::Value* v = toml::find(t, "reduction")) {
        const toml::Table& red = v->as_table();
        if (const toml::Value* primes = toml::find(red, "primes_over_p")) {
            for (const auto& e : primes->as_array()) {
                const toml::Table& entry = e.as_table();
                PrimeAboveP prime;
                prime.kind = reduction_kind_from_string(
                    toml::require(entry, "kind").as_string());
                if (const toml::Value* c = toml::find(entry, "mp_case")) {
                    const std::string& s = c->as_string();
                    if (s == "I") {
                        prime.mp_case = MpCase::CaseI;
                    } else if (s == "II") {
                        prime.mp_case = MpCase::CaseII;
                    } else {
                        throw ParseError("mp_case must be \"I\" or \"II\"");
                    }
                }
                scn.reduction.primes_over_p.push_back(prime);
            }
        }
        if (const toml::Value* mp = toml::find(red, "m_p")) {
            for (const auto& [level, count] : mp->as_table()) {
                scn.reduction.m_p_by_level[level] = count.as_integer();
            }
        }
    }
    if (const toml::Value* v = toml::find(t, "corank")) {
        for (const auto& [level, r] : v->as_table()) {
            scn.corank[level] = r.as_integer();
        }
    }
    if (const toml::Value* v = toml::find(t, "tower")) {
        const toml::Table& tw = v->as_table();
        TowerData tower;
        tower.m = toml::require(tw, "m").as_integer();
        tower.levels = static_cast<int>(toml::require(tw, "levels").as_integer());
        scn.tower = tower;
    }
    if (const toml::Value* v = toml::find(t, "analytic")) {
        for (const auto& [level, r] : v->as_table()) {
            scn.analytic_orders[level] = r.as_integer();
        }
    }
    if (const toml::Value* v = toml::find(t, "euler")) {
        const toml::Table& eu = v->as_table();
        EulerComponents c;
        c.r_l = toml::require(eu, "r_L").as_integer();
        if (const toml::Value* x = toml::find(eu, "gamma_index")) c.gamma_index = x->as_integer();
        if (const toml::Value* x = toml::find(eu, "v_reg")) c.v_reg = x->as_integer();
        if (const toml::Value* x = toml::find(eu, "v_sha")) c.v_sha = x->as_integer();
        if (const toml::Value* x = toml::find(eu, "v_torsion")) c.v_torsion = x->as_integer();
        if (const toml::Value* x = toml::find(eu, "v_tamagawa")) {
            for (const auto& e : x->as_array()) c.v_tamagawa.push_back(e.as_integer());
        }
        if (const toml::Value* x = toml::find(eu, "v_d")) {
            for (const auto& e : x->as_array()) c.v_d.push_back(e.as_integer());
        }
        if (const toml::Value* x = toml::find(eu, "v_lvalues")) c.v_lvalues = x->as_integer();
        scn.euler = c;
    }
    validate_scenario(scn);
    return scn;
}

inline toml::Table load_toml_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MissingData("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return toml::parse(buf.str());
}

}  // namespace iwa
