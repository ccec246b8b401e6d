#include "lrinv/schedules.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>

namespace lrinv {

namespace {

double parse_number(std::string_view text) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || text.empty() || !std::isfinite(value))
        throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    return value;
}

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

Domain Domain::intersect(const Domain& other) const {
    return {std::max(lo, other.lo), std::min(hi, other.hi)};
}

// ---- TimeFunction --------------------------------------------------------

TimeFunction TimeFunction::constant(double c) { return {Kind::constant, {c}}; }

TimeFunction TimeFunction::linear(double c0, double c1) { return {Kind::linear, {c0, c1}}; }

TimeFunction TimeFunction::sinusoid(double c0, double c1, double c2, double c3) {
    return {Kind::sinusoid, {c0, c1, c2, c3}};
}

TimeFunction TimeFunction::table(std::vector<std::pair<double, double>> knots) {
    if (knots.size() < 2) throw std::invalid_argument("table: at least two knots required");
    for (std::size_t i = 1; i < knots.size(); ++i)
        if (!(knots[i].first > knots[i - 1].first))
            throw std::invalid_argument("table: knot times must be strictly increasing");
    TimeFunction tf(Kind::table, {});
    tf.knots_ = std::move(knots);
    return tf;
}

TimeFunction TimeFunction::parse(std::string_view descriptor) {
    std::istringstream in{std::string(descriptor)};
    std::string kind;
    in >> kind;
    std::vector<std::string> tokens;
    for (std::string tok; in >> tok;) tokens.push_back(tok);

    auto numbers = [&](std::size_t expected) {
        if (tokens.size() != expected)
            throw std::invalid_argument("'" + kind + "' expects " + std::to_string(expected) + " parameters");
        std::vector<double> v;
        for (const auto& t : tokens) v.push_back(parse_number(t));
        return v;
    };

    if (kind == "constant") return constant(numbers(1)[0]);
    if (kind == "linear") {
        auto v = numbers(2);
        return linear(v[0], v[1]);
    }
    if (kind == "sinusoid") {
        auto v = numbers(4);
        return sinusoid(v[0], v[1], v[2], v[3]);
    }
    if (kind == "table") {
        std::vector<std::pair<double, double>> knots;
        for (const auto& t : tokens) {
            const auto colon = t.find(':');
            if (colon == std::string::npos) throw std::invalid_argument("table knot must be t:value, got '" + t + "'");
            knots.emplace_back(parse_number(std::string_view(t).substr(0, colon)),
                               parse_number(std::string_view(t).substr(colon + 1)));
        }
        return table(std::move(knots));
    }
    throw std::invalid_argument("unknown time-function kind '" + kind + "'");
}

std::string TimeFunction::describe() const {
    std::string out;
    switch (kind_) {
        case Kind::constant: out = "constant"; break;
        case Kind::linear: out = "linear"; break;
        case Kind::sinusoid: out = "sinusoid"; break;
        case Kind::table: out = "table"; break;
    }
    for (double p : params_) out += " " + format_number(p);
    for (const auto& [t, v] : knots_) out += " " + format_number(t) + ":" + format_number(v);
    return out;
}

Domain TimeFunction::domain() const {
    if (kind_ == Kind::table) return {knots_.front().first, knots_.back().first};
    return {};
}

double TimeFunction::operator()(double t) const {
    switch (kind_) {
        case Kind::constant: return params_[0];
        case Kind::linear: return params_[0] + params_[1] * t;
        case Kind::sinusoid: return params_[0] + params_[1] * std::sin(params_[2] * t + params_[3]);
        case Kind::table: break;
    }
    if (!domain().contains(t)) throw std::domain_error("table evaluated outside [t_first, t_last]");
    auto hi = std::lower_bound(knots_.begin(), knots_.end(), t,
                               [](const auto& knot, double x) { return knot.first < x; });
    if (hi == knots_.begin()) return hi->second;
    auto lo = hi - 1;
    const double w = (t - lo->first) / (hi->first - lo->first);
    return (1.0 - w) * lo->second + w * hi->second;
}

TimeFunction TimeFunction::scaled(double factor) const {
    TimeFunction out = *this;
    switch (kind_) {
        case Kind::constant:
        case Kind::linear:
            for (double& p : out.params_) p *= factor;
            break;
        case Kind::sinusoid:
            out.params_[0] *= factor;
            out.params_[1] *= factor;
            break;
        case Kind::table:
            for (auto& knot : out.knots_) knot.second *= factor;
            break;
    }
    return out;
}

// ---- ScalarFunction ------------------------------------------------------

ScalarFunction::ScalarFunction() : f_([](double) { return 0.0; }) {}

ScalarFunction::ScalarFunction(const TimeFunction& tf) : f_([tf](double t) { return tf(t); }), domain_(tf.domain()) {}

ScalarFunction::ScalarFunction(std::function<double(double)> f, Domain domain) : f_(std::move(f)), domain_(domain) {}

double ScalarFunction::operator()(double t) const {
    if (!domain_.contains(t)) throw std::domain_error("time outside the declared domain");
    return f_(t);
}

ScalarFunction ScalarFunction::combine(double constant, std::vector<std::pair<double, ScalarFunction>> terms) {
    Domain dom;
    for (const auto& term : terms) dom = dom.intersect(term.second.domain());
    return {[constant, terms = std::move(terms)](double t) {
                double v = constant;
                for (const auto& [coeff, f] : terms) v += coeff * f(t);
                return v;
            },
            dom};
}

// ---- coefficients ----------------------------------------------------------

Complex Coefficients::ladder() const { return 0.5 * omega * std::sin(theta) * std::exp(-kI * phi); }

double Coefficients::diagonal() const { return omega * std::cos(theta); }

Coefficients polar_from_generator(Complex ladder, double diagonal) {
    Coefficients c;
    const double transverse = 2.0 * std::abs(ladder);
    c.omega = std::hypot(diagonal, transverse);
    if (c.omega == 0.0) return c;
    c.theta = std::atan2(transverse, diagonal);
    c.phi = transverse == 0.0 ? 0.0 : wrap_angle(-std::arg(ladder));
    return c;
}

CoefficientSchedule::CoefficientSchedule(ScalarFunction omega, ScalarFunction theta, ScalarFunction phi)
    : domain_(omega.domain().intersect(theta.domain()).intersect(phi.domain())) {
    eval_ = [omega = std::move(omega), theta = std::move(theta), phi = std::move(phi)](double t) {
        return Coefficients{omega(t), theta(t), phi(t)};
    };
}

CoefficientSchedule CoefficientSchedule::from_generator_coefficients(std::function<Complex(double)> ladder,
                                                                     ScalarFunction diagonal, Domain domain) {
    const Domain dom = domain.intersect(diagonal.domain());
    return {[ladder = std::move(ladder), diagonal = std::move(diagonal)](double t) {
                return polar_from_generator(ladder(t), diagonal(t));
            },
            dom};
}

Coefficients CoefficientSchedule::at(double t) const {
    if (!domain_.contains(t)) throw std::domain_error("schedule evaluated outside its domain");
    return eval_(t);
}

Matrix generator_hamiltonian(const AlgebraRealization& r, const Coefficients& c) {
    const double half_sin = 0.5 * c.omega * std::sin(c.theta);
    return half_sin * std::exp(-kI * c.phi) * r.A + half_sin * std::exp(kI * c.phi) * r.B +
           c.omega * std::cos(c.theta) * r.C;
}

Matrix hamiltonian_at(const HamiltonianModel& model, double t) {
    Matrix h = generator_hamiltonian(model.realization, model.schedule.at(t));
    h.diagonal().array() += model.scalar_offset(t);
    return h;
}

// ---- catalog -------------------------------------------------------------

HamiltonianModel spin_model(double j, CoefficientSchedule schedule, ScalarFunction offset) {
    return {spin_j(j), std::move(schedule), std::move(offset)};
}

HamiltonianModel two_level_model(CoefficientSchedule schedule, ScalarFunction offset) {
    return {two_level_realization(), std::move(schedule), std::move(offset)};
}

namespace {

std::function<Complex(double)> polar_complex(ScalarFunction modulus, ScalarFunction argument, bool conjugate) {
    return [modulus = std::move(modulus), argument = std::move(argument), conjugate](double t) {
        const Complex g = modulus(t) * std::exp(kI * argument(t));
        return conjugate ? std::conj(g) : g;
    };
}

}  // namespace

HamiltonianModel coupled_oscillator_model(int n_total, ScalarFunction omega1, ScalarFunction omega2,
                                          ScalarFunction g_mod, ScalarFunction g_arg) {
    AlgebraRealization r = schwinger_su2(n_total);
    const double n_scalar = r.conserved_scalar;
    // w1 (N + J3) + w2 (N - J3) + g J+ + g* J-
    ScalarFunction diag = ScalarFunction::combine(0.0, {{1.0, omega1}, {-1.0, omega2}});
    ScalarFunction offset = ScalarFunction::combine(0.0, {{n_scalar, omega1}, {n_scalar, omega2}});
    const Domain dom = g_mod.domain().intersect(g_arg.domain());
    auto schedule = CoefficientSchedule::from_generator_coefficients(polar_complex(g_mod, g_arg, false), diag, dom);
    return {std::move(r), std::move(schedule), std::move(offset)};
}

HamiltonianModel two_photon_su11_model(double n_half_difference, int dim, ScalarFunction omega1,
                                       ScalarFunction omega2, ScalarFunction g_mod, ScalarFunction g_arg) {
    const double twice = 2.0 * n_half_difference;
    if (std::abs(twice - std::round(twice)) > 1e-12)
        throw std::invalid_argument("two-photon-su11: 2N must be an integer");
    AlgebraRealization r = su11_discrete(std::abs(n_half_difference) + 0.5, dim);
    r.name = "two-photon-su11";
    r.conserved_scalar = n_half_difference;
    // (w1 + w2) K3 + (w1 - w2) N - (w1 + w2)/2 + g K- + g* K+
    ScalarFunction diag = ScalarFunction::combine(0.0, {{1.0, omega1}, {1.0, omega2}});
    ScalarFunction offset = ScalarFunction::combine(
        0.0, {{n_half_difference - 0.5, omega1}, {-n_half_difference - 0.5, omega2}});
    const Domain dom = g_mod.domain().intersect(g_arg.domain());
    auto schedule = CoefficientSchedule::from_generator_coefficients(polar_complex(g_mod, g_arg, true), diag, dom);
    return {std::move(r), std::move(schedule), std::move(offset)};
}

HamiltonianModel gho_model(int dim, const TimeFunction& x, const TimeFunction& y, const TimeFunction& z) {
    const bool y_zero = y.kind() == TimeFunction::Kind::constant && y.parameters()[0] == 0.0;
    if (!y_zero) throw std::invalid_argument("gho: Y != 0 has no real (w, theta, phi) form");
    if (x.describe() != z.describe()) throw std::invalid_argument("gho: X and Z must coincide for a real (w, theta, phi) form");
    // 1/2 X q^2 + 1/2 X p^2: ladder coefficient X/2, no C term.
    const ScalarFunction xs = x;
    auto schedule = CoefficientSchedule::from_generator_coefficients(
        [xs](double t) { return Complex(0.5 * xs(t), 0.0); }, ScalarFunction::zero(), xs.domain());
    return {gho_realization(dim), std::move(schedule), ScalarFunction::zero()};
}

namespace {

class ParamReader {
public:
    ParamReader(const std::string& model, const ParamSet& params) : model_(model), params_(params) {}

    bool has(const std::string& key) const { return params_.count(key) != 0; }

    const std::string& raw(const std::string& key) {
        used_.insert(key);
        auto it = params_.find(key);
        if (it == params_.end()) throw std::invalid_argument(model_ + ": missing parameter '" + key + "'");
        return it->second;
    }

    double number(const std::string& key) {
        try {
            return parse_number(raw(key));
        } catch (const std::invalid_argument& e) {
            if (!has(key)) throw;
            throw std::invalid_argument(model_ + "." + key + ": " + e.what());
        }
    }

    int integer(const std::string& key) {
        const double v = number(key);
        if (v != std::round(v)) throw std::invalid_argument(model_ + "." + key + " must be an integer");
        return static_cast<int>(v);
    }

    TimeFunction function(const std::string& key) {
        try {
            return TimeFunction::parse(raw(key));
        } catch (const std::invalid_argument& e) {
            if (!has(key)) throw;
            throw std::invalid_argument(model_ + "." + key + ": " + e.what());
        }
    }

    TimeFunction function_or(const std::string& key, const TimeFunction& fallback) {
        return has(key) ? function(key) : fallback;
    }

    void reject_unused() const {
        for (const auto& [key, value] : params_)
            if (!used_.count(key)) throw std::invalid_argument(model_ + ": unknown parameter '" + key + "'");
    }

private:
    std::string model_;
    const ParamSet& params_;
    std::set<std::string> used_;
};

CoefficientSchedule polar_schedule(ParamReader& p) {
    return {p.function("omega"), p.function("theta"), p.function("phi")};
}

}  // namespace

HamiltonianModel model_catalog(const std::string& name, const ParamSet& params) {
    ParamReader p(name, params);
    HamiltonianModel model = [&]() -> HamiltonianModel {
        const TimeFunction zero = TimeFunction::constant(0.0);
        if (name == "spin") {
            auto schedule = polar_schedule(p);
            return spin_model(p.number("j"), std::move(schedule), p.function_or("offset", zero));
        }
        if (name == "two-level") {
            auto schedule = polar_schedule(p);
            return two_level_model(std::move(schedule), p.function_or("offset", zero));
        }
        if (name == "schwinger") {
            auto schedule = polar_schedule(p);
            return {schwinger_su2(p.integer("n_total")), std::move(schedule), p.function_or("offset", zero)};
        }
        if (name == "su11") {
            auto schedule = polar_schedule(p);
            return {su11_discrete(p.number("k"), p.integer("dim")), std::move(schedule), p.function_or("offset", zero)};
        }
        if (name == "coupled-osc") {
            return coupled_oscillator_model(p.integer("n_total"), p.function("omega1"), p.function("omega2"),
                                            p.function("g_mod"), p.function("g_arg"));
        }
        if (name == "two-photon-su11") {
            return two_photon_su11_model(p.number("n_half_difference"), p.integer("dim"), p.function("omega1"),
                                         p.function("omega2"), p.function("g_mod"), p.function("g_arg"));
        }
        if (name == "gho") {
            const int dim = p.integer("dim");
            if (p.has("X") || p.has("Y") || p.has("Z"))
                return gho_model(dim, p.function("X"), p.function_or("Y", zero), p.function("Z"));
            auto schedule = polar_schedule(p);
            return {gho_realization(dim), std::move(schedule), ScalarFunction::zero()};
        }
        throw std::invalid_argument("unknown model '" + name + "'");
    }();

    // explicit structure-constant override
    if (p.has("m") || p.has("n")) {
        const double m = p.has("m") ? p.number("m") : model.realization.constants.m();
        const double n = p.has("n") ? p.number("n") : model.realization.constants.n();
        model.realization.constants = StructureConstants(m, n);
    }
    p.reject_unused();
    return model;
}

}  // namespace lrinv
