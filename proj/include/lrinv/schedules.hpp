// schedules.hpp: time-dependent coefficients and assembly of H(t)
//
//   H(t) = w(t) { 1/2 sin(th) e^{-i ph} A + 1/2 sin(th) e^{i ph} B + cos(th) C }
//          + offset(t) * 1

#pragma once

#include "lrinv/algebra.hpp"
#include "lrinv/linalg.hpp"

#include <functional>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lrinv {

struct Domain {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    bool contains(double t) const { return t >= lo && t <= hi; }
    Domain intersect(const Domain& other) const;
};

// Closed-form scalar descriptor. Parameters by kind:
//   constant  c
//   linear    c0 + c1 t
//   sinusoid  c0 + c1 sin(c2 t + c3)
//   table     sorted (t, value) knots, linear interpolation, domain [t_first, t_last]
class TimeFunction {
public:
    enum class Kind { constant, linear, sinusoid, table };

    static TimeFunction constant(double c);
    static TimeFunction linear(double c0, double c1);
    static TimeFunction sinusoid(double c0, double c1, double c2, double c3);
    static TimeFunction table(std::vector<std::pair<double, double>> knots);

    // Text form used in scenario files, e.g. "sinusoid 0 1 2 0.5" or
    // "table 0:1 0.5:1.2 1:1.1". Throws std::invalid_argument on bad input.
    static TimeFunction parse(std::string_view descriptor);
    std::string describe() const;

    double operator()(double t) const;
    TimeFunction scaled(double factor) const;

    Kind kind() const { return kind_; }
    const std::vector<double>& parameters() const { return params_; }
    const std::vector<std::pair<double, double>>& knots() const { return knots_; }
    Domain domain() const;

private:
    TimeFunction(Kind kind, std::vector<double> params) : kind_(kind), params_(std::move(params)) {}

    Kind kind_ = Kind::constant;
    std::vector<double> params_;
    std::vector<std::pair<double, double>> knots_;
};

// Any real function of time with a declared domain. TimeFunctions convert
// implicitly; derived coefficients (preset mappings) are built with combine().
class ScalarFunction {
public:
    ScalarFunction();
    ScalarFunction(const TimeFunction& tf);  // NOLINT(google-explicit-constructor)
    ScalarFunction(std::function<double(double)> f, Domain domain);

    double operator()(double t) const;
    Domain domain() const { return domain_; }

    static ScalarFunction zero() { return {}; }
    // constant + sum_k coeff_k * f_k
    static ScalarFunction combine(double constant, std::vector<std::pair<double, ScalarFunction>> terms);

private:
    std::function<double(double)> f_;
    Domain domain_;
};

struct Coefficients {
    double omega = 0.0;
    double theta = 0.0;
    double phi = 0.0;

    // Coefficient multiplying A; B gets its conjugate.
    Complex ladder() const;
    // Coefficient multiplying C.
    double diagonal() const;
};

// Inverts (ladder, diagonal) to the polar triple with theta in [0, pi],
// phi in (-pi, pi], omega >= 0; phi = 0 whenever sin(theta) = 0.
Coefficients polar_from_generator(Complex ladder, double diagonal);

class CoefficientSchedule {
public:
    CoefficientSchedule(ScalarFunction omega, ScalarFunction theta, ScalarFunction phi);

    // ladder(t) multiplies A, diagonal(t) multiplies C; converted pointwise to polar form.
    static CoefficientSchedule from_generator_coefficients(std::function<Complex(double)> ladder,
                                                           ScalarFunction diagonal, Domain domain);

    Coefficients at(double t) const;
    Domain domain() const { return domain_; }

private:
    CoefficientSchedule(std::function<Coefficients(double)> eval, Domain domain)
        : eval_(std::move(eval)), domain_(domain) {}

    std::function<Coefficients(double)> eval_;
    Domain domain_;
};

struct HamiltonianModel {
    AlgebraRealization realization;
    CoefficientSchedule schedule;
    ScalarFunction scalar_offset;

    Domain domain() const { return schedule.domain().intersect(scalar_offset.domain()); }
};

// Three-generator part only (no identity term).
Matrix generator_hamiltonian(const AlgebraRealization& r, const Coefficients& c);
Matrix hamiltonian_at(const HamiltonianModel& model, double t);

// ---- catalog -------------------------------------------------------------

HamiltonianModel spin_model(double j, CoefficientSchedule schedule, ScalarFunction offset = ScalarFunction::zero());
HamiltonianModel two_level_model(CoefficientSchedule schedule, ScalarFunction offset = ScalarFunction::zero());

// w1 a1^dag a1 + w2 a2^dag a2 + g a1^dag a2 + g* a2^dag a1 on the N_total block,
// g = g_mod e^{i g_arg}.
HamiltonianModel coupled_oscillator_model(int n_total, ScalarFunction omega1, ScalarFunction omega2,
                                          ScalarFunction g_mod, ScalarFunction g_arg);

// w1 a1^dag a1 + w2 a2^dag a2 + g a1 a2 + g* a1^dag a2^dag on the sector with
// N = (a1^dag a1 - a2^dag a2)/2 fixed, Bargmann index k = |N| + 1/2.
HamiltonianModel two_photon_su11_model(double n_half_difference, int dim, ScalarFunction omega1,
                                       ScalarFunction omega2, ScalarFunction g_mod, ScalarFunction g_arg);

// 1/2 [X q^2 + Y (qp + pq) + Z p^2]. The real polar form exists only for
// X == Z and Y == 0; anything else is rejected.
HamiltonianModel gho_model(int dim, const TimeFunction& x, const TimeFunction& y, const TimeFunction& z);

// Key-value front end used by the scenario loader. Values are numbers or
// TimeFunction descriptors.
using ParamSet = std::map<std::string, std::string>;
HamiltonianModel model_catalog(const std::string& name, const ParamSet& params);

}  // namespace lrinv
