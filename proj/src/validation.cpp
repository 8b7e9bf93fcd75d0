#include "nlshear/validation.hpp"

#include "nlshear/diagnostics.hpp"
#include "nlshear/oracle.hpp"
#include "nlshear/scenario.hpp"
#include "nlshear/simulation.hpp"
#include "nlshear/spectral_ops.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

namespace nlshear {

namespace {

ValidationRow row(const std::string& suite, const std::string& name, double value, const std::string& relation,
                  double threshold, const std::string& note = {}) {
    ValidationRow r{suite, name, value, threshold, relation, false, note};
    if (relation == "<=") r.pass = value <= threshold;
    else if (relation == ">=") r.pass = value >= threshold;
    else if (relation == "==") r.pass = value == threshold;
    else throw std::invalid_argument("validation: unknown relation " + relation);
    return r;
}

double rel_diff(const SpectralField& a, const SpectralField& b) {
    auto x = a.values(), y = b.values();
    double d = 0.0, m = 0.0;
    for (std::size_t n = 0; n < x.size(); ++n) {
        d = std::max(d, std::abs(x[n] - y[n]));
        m = std::max(m, std::abs(y[n]));
    }
    return m > 0.0 ? d / m : d;
}

double max_diff(const SimState& a, const SimState& b) {
    auto w1 = a.w.values(), w2 = b.w.values(), v1 = a.v.values(), v2 = b.v.values();
    double d = 0.0;
    for (std::size_t n = 0; n < w1.size(); ++n)
        d = std::max({d, std::abs(w1[n] - w2[n]), std::abs(v1[n] - v2[n])});
    return d;
}

SimState integrate(const OperatorContext& ctx, const SimState& s0, double dt, double t_end, Scheme scheme) {
    StepControl c;
    c.dt = dt;
    c.t_end = t_end;
    c.scheme = scheme;
    SimState out(s0);
    const RunOutcome o = run(ctx, s0, c, {}, &out);
    if (o.status != RunStatus::completed) throw std::runtime_error("validation run halted: " + o.message);
    return out;
}

Energy g1_energy() { return IsotropicEnergy::linear_plus(IsotropicEnergy::power_law(1.0, 2.0)); }

SpectralField bump(const Grid2D& g, double A, double sigma) {
    return SpectralField::from_function(
        g, [=](double x, double y) { return A * std::exp(-(x * x + y * y) / (2.0 * sigma * sigma)); });
}

} // namespace

std::vector<ValidationRow> validate_kernels() {
    const std::string S = "kernels";
    std::vector<ValidationRow> rows;
    rows.push_back(row(S, "gaussian(0,0) = 1", std::abs(gaussian()(0, 0) - 1.0), "<=", 1e-14));
    rows.push_back(row(S, "bessel_k0(1,1) = 1/3", std::abs(bessel_k0()(1, 1) - 1.0 / 3.0), "<=", 1e-14));
    rows.push_back(row(S, "bi_helmholtz(2,1)(1,0) = 1/10", std::abs(bi_helmholtz(2, 1)(1, 0) - 0.1), "<=", 1e-14));

    for (int n : {64, 128}) {
        const Grid2D g(n, n, 40.0, 40.0);
        const std::string tag = " on " + std::to_string(n) + "^2";
        for (const KernelSymbol& k : {gaussian(), bessel_k0(), bi_helmholtz(2.0, 1.0)}) {
            const DecayReport rep = validate_decay(k, g);
            rows.push_back(row(S, k.name() + " decay" + tag, rep.empirical_C, "<=", rep.C * (1.0 + 1e-12),
                               rep.pass() ? "" : "decay check failed"));
            rows.push_back(row(S, k.name() + " nonnegative" + tag, rep.min_symbol, ">=", 0.0));
        }
        const DecayReport d = validate_decay(dirac(), g);
        rows.push_back(row(S, "dirac outside decay class" + tag, d.in_decay_class ? 1.0 : 0.0, "==", 0.0));
        const DecayReport loose = validate_decay(gaussian(), g, 10.0, 1.0);
        rows.push_back(row(S, "gaussian r=10 C=1 rejected" + tag, loose.pass() ? 1.0 : 0.0, "==", 0.0,
                           "empirical C exceeds 1"));
    }
    return rows;
}

std::vector<ValidationRow> validate_oracles() {
    const std::string S = "oracles";
    std::vector<ValidationRow> rows;

    {
        const Grid2D g(16, 16, 8.0, 8.0);
        const KernelSymbol k = bessel_k0();
        const oracle::DenseField beta = oracle::kernel_samples(k, g);
        std::mt19937_64 rng(20240611);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        double worst = 0.0;
        const auto t0 = std::chrono::steady_clock::now();
        for (int inst = 0; inst < 20; ++inst) {
            std::vector<double> vals(g.size());
            for (auto& x : vals) x = u(rng);
            SpectralField f = SpectralField::from_values(g, vals);
            auto c = f.mutable_coefficients();
            for (int i = 0; i < g.nx(); ++i)
                for (int j = 0; j < g.ny(); ++j) c[g.index(i, j)] *= k(g.xi_x(i), g.xi_y(j));
            oracle::DenseField in(16, 16);
            in.values = vals;
            const oracle::DenseField direct = oracle::direct_convolution(beta, in, g);
            const double scale = f.max_abs();
            worst = std::max(worst, oracle::max_abs_difference(f, direct) / scale);
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rows.push_back(row(S, "direct vs spectral convolution, 20 x 16^2", worst, "<=", 1e-10));
        rows.push_back(row(S, "convolution oracle runtime [s]", secs, "<=", 1.0));
    }

    {
        const Grid2D g(32, 32, 40.0, 40.0);
        const OperatorContext ctx(g, bessel_k0(), g1_energy());
        const SpectralField w = oracle::random_band_limited(g, 7, 6, 0.5);
        const SpectralField Kw = apply_K(ctx, w);
        const oracle::DenseField d = oracle::direct_space_K(ctx, w);
        rows.push_back(row(S, "direct-space K vs apply_K, 32^2", oracle::max_abs_difference(Kw, d) / Kw.max_abs(),
                           "<=", 1e-10));
    }

    {
        double err[2];
        int k = 0;
        for (int n : {64, 128}) {
            const Grid2D g(n, n, 40.0, 40.0);
            const OperatorContext ctx(g, bessel_k0(), g1_energy());
            const SpectralField w = bump(g, 0.5, 3.0);
            err[k++] = oracle::max_abs_difference(apply_K(ctx, w), oracle::finite_difference_K(ctx, w));
        }
        rows.push_back(row(S, "finite-difference K observed order", std::log2(err[0] / err[1]), ">=", 1.9));
    }

    for (const KernelSymbol& kern : {bessel_k0(), bi_helmholtz(2.0, 1.0)}) {
        const Grid2D g(64, 64, 40.0, 40.0);
        const OperatorContext ctx(g, kern, g1_energy());
        const SpectralField w = oracle::random_band_limited(g, 11, 12, 0.5);
        rows.push_back(row(S, "local form vs apply_K, " + kern.name(),
                           rel_diff(apply_local_equivalent(ctx, w), apply_K(ctx, w)), "<=", 1e-12));
    }

    {
        const Scenario s = builtin_scenario("g1");
        const OperatorContext ctx = make_context(s);
        const InitialState init = build_initial_state(s, ctx.grid());
        const double t_end = 0.25;
        const oracle::PicardResult p = oracle::picard_solve(ctx, init.state.w, init.state.v, t_end, 8, 65);
        const SimState rk = integrate(ctx, init.state, t_end / 50.0, t_end, Scheme::rk4);
        rows.push_back(row(S, "Picard vs RK4 at t = 0.25", max_diff(p.state, rk), "<=", 1e-6));
        double ratio = 0.0;
        for (std::size_t n = 1; n + 1 < p.residuals.size(); ++n)
            if (p.residuals[n] > 0.0 && p.residuals[n - 1] > 0.0)
                ratio = std::max(ratio, p.residuals[n] / p.residuals[n - 1]);
        rows.push_back(row(S, "Picard contraction factor (worst)", ratio, "<=", 0.5));
    }
    return rows;
}

std::vector<ValidationRow> validate_convergence() {
    const std::string S = "convergence";
    std::vector<ValidationRow> rows;
    const Scenario s = builtin_scenario("g1");
    const OperatorContext ctx = make_context(s);
    const InitialState init = build_initial_state(s, ctx.grid());

    for (Scheme scheme : {Scheme::rk4, Scheme::leapfrog}) {
        const double dt = 0.2, t_end = 2.0;
        const SimState ref = integrate(ctx, init.state, dt / 8.0, t_end, scheme);
        const double e1 = max_diff(integrate(ctx, init.state, dt, t_end, scheme), ref);
        const double e2 = max_diff(integrate(ctx, init.state, dt / 2.0, t_end, scheme), ref);
        const double order = std::log2(e1 / e2);
        const double expect = scheme == Scheme::rk4 ? 3.5 : 1.8;
        rows.push_back(row(S, to_string(scheme) + " self-convergence order", order, ">=", expect));
    }

    const RunResult a = run_scenario(s);
    Scenario half = s;
    half.integrator.dt = a.dt / 2.0;
    const RunResult b = run_scenario(half);
    rows.push_back(row(S, "G1 energy drift", a.energy_drift, "<=", 1e-6));
    rows.push_back(row(S, "G1 drift reduction at dt/2", a.energy_drift / b.energy_drift, ">=", 10.0));
    return rows;
}

std::vector<ValidationRow> run_validation(const std::string& what) {
    if (what == "kernels") return validate_kernels();
    if (what == "oracles") return validate_oracles();
    if (what == "convergence") return validate_convergence();
    throw std::invalid_argument("unknown validation suite '" + what + "' (kernels, oracles, convergence)");
}

void write_validation_csv(std::ostream& out, const std::vector<ValidationRow>& rows) {
    out << "suite,check,value,relation,threshold,pass,note\n";
    char v[40], t[40];
    for (const auto& r : rows) {
        std::snprintf(v, sizeof v, "%.17g", r.value);
        std::snprintf(t, sizeof t, "%.17g", r.threshold);
        out << r.suite << ",\"" << r.name << "\"," << v << "," << r.relation << "," << t << ","
            << (r.pass ? "pass" : "FAIL") << ",\"" << r.note << "\"\n";
    }
}

void print_validation_table(std::ostream& out, const std::vector<ValidationRow>& rows) {
    char line[256];
    for (const auto& r : rows) {
        std::snprintf(line, sizeof line, "%-4s %-48s %12.4e %s %-10.3e %s", r.pass ? "ok" : "FAIL", r.name.c_str(),
                      r.value, r.relation.c_str(), r.threshold, r.note.c_str());
        out << line << '\n';
    }
}

} // namespace nlshear
