#include "nlshear/integrator.hpp"

#include "nlshear/errors.hpp"
#include "nlshear/spectral_ops.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <variant>

namespace nlshear {

SimState::SimState(SpectralField w_, SpectralField v_, double t_, long step)
    : w(std::move(w_)), v(std::move(v_)), t(t_), step_index(step) {
    if (!(w.grid() == v.grid())) throw std::invalid_argument("SimState: w and v on different grids");
}

void StepControl::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("step control: dt must be positive");
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("step control: t_end must be positive");
    if (dt > t_end) throw std::invalid_argument("step control: dt must not exceed t_end");
    if (max_steps <= 0) throw std::invalid_argument("step control: max_steps must be positive");
    if (!(sup_grad_factor > 0.0)) throw std::invalid_argument("step control: sup_grad_factor must be positive");
    if (sup_grad_limit && !(*sup_grad_limit > 0.0))
        throw std::invalid_argument("step control: sup_grad_limit must be positive");
    if (!(field_limit > 0.0)) throw std::invalid_argument("step control: field_limit must be positive");
    if (max_halvings < 0) throw std::invalid_argument("step control: max_halvings must be >= 0");
}

std::string to_string(RunStatus s) {
    switch (s) {
    case RunStatus::completed: return "Completed";
    case RunStatus::sup_gradient_exceeded: return "SupGradientExceeded";
    case RunStatus::field_magnitude_exceeded: return "FieldMagnitudeExceeded";
    case RunStatus::non_finite: return "NonFinite";
    case RunStatus::max_steps: return "MaxSteps";
    }
    return "Unknown";
}

std::string to_string(Scheme s) { return s == Scheme::rk4 ? "rk4" : "leapfrog"; }

SimState step_rk4(const OperatorContext& ctx, const SimState& s, double dt) {
    const SpectralField& w = s.w;
    const SpectralField& v = s.v;

    SpectralField k1v = apply_K(ctx, w);

    SpectralField w2 = w;
    w2.axpy(0.5 * dt, v);
    SpectralField v2 = v;
    v2.axpy(0.5 * dt, k1v);
    SpectralField k2v = apply_K(ctx, w2);

    SpectralField w3 = w;
    w3.axpy(0.5 * dt, v2);
    SpectralField v3 = v;
    v3.axpy(0.5 * dt, k2v);
    SpectralField k3v = apply_K(ctx, w3);

    SpectralField w4 = w;
    w4.axpy(dt, v3);
    SpectralField v4 = v;
    v4.axpy(dt, k3v);
    SpectralField k4v = apply_K(ctx, w4);

    // k_w stages are v, v2, v3, v4.
    SpectralField w_new = w;
    SpectralField v_new = v;
    {
        auto wn = w_new.mutable_values();
        auto vn = v_new.mutable_values();
        auto a1 = v.values(), a2 = v2.values(), a3 = v3.values(), a4 = v4.values();
        auto b1 = k1v.values(), b2 = k2v.values(), b3 = k3v.values(), b4 = k4v.values();
        const double c = dt / 6.0;
        for (std::size_t n = 0; n < wn.size(); ++n) {
            wn[n] += c * (a1[n] + 2.0 * a2[n] + 2.0 * a3[n] + a4[n]);
            vn[n] += c * (b1[n] + 2.0 * b2[n] + 2.0 * b3[n] + b4[n]);
        }
    }
    return SimState(std::move(w_new), std::move(v_new), s.t + dt, s.step_index + 1);
}

SimState step_leapfrog(const OperatorContext& ctx, const SimState& s, double dt) {
    // kick - drift - kick
    SpectralField v_half = s.v;
    v_half.axpy(0.5 * dt, apply_K(ctx, s.w));
    SpectralField w_new = s.w;
    w_new.axpy(dt, v_half);
    SpectralField v_new = v_half;
    v_new.axpy(0.5 * dt, apply_K(ctx, w_new));
    return SimState(std::move(w_new), std::move(v_new), s.t + dt, s.step_index + 1);
}

SimState step(const OperatorContext& ctx, const SimState& state, double dt, Scheme scheme) {
    return scheme == Scheme::rk4 ? step_rk4(ctx, state, dt) : step_leapfrog(ctx, state, dt);
}

double default_time_step(const KernelSymbol& kernel, const Grid2D& grid) {
    const double w = max_linear_frequency(kernel, grid);
    if (!(w > 0.0)) throw std::invalid_argument("default_time_step: kernel has no positive linear frequency");
    return 0.2 / w;
}

namespace {

struct Halt {
    RunStatus status;
    SimState state;
    double sup_grad;
    std::string message;
};

class Driver {
public:
    Driver(const OperatorContext& ctx, const StepControl& control, double sup_limit)
        : ctx_(ctx), control_(control), sup_limit_(sup_limit) {}

    // Either the advanced state (with its sup-gradient) or a halt.
    std::variant<std::pair<SimState, double>, Halt> advance(const SimState& s, double h, int depth) {
        std::optional<SimState> next;
        std::string failure;
        try {
            next.emplace(step(ctx_, s, h, control_.scheme));
            if (!next->all_finite()) failure = "non-finite state after step";
        } catch (const NumericalError& e) {
            failure = e.what();
        }
        if (!failure.empty()) {
            if (depth < control_.max_halvings) {
                ++halvings;
                auto first = advance(s, 0.5 * h, depth + 1);
                if (std::holds_alternative<Halt>(first)) return first;
                const SimState mid = std::get<0>(std::move(first)).first;
                return advance(mid, 0.5 * h, depth + 1);
            }
            SimState bad = next ? std::move(*next) : SimState(s.w, s.v, s.t + h, s.step_index + 1);
            return Halt{RunStatus::non_finite, std::move(bad), std::numeric_limits<double>::quiet_NaN(), failure};
        }
        const double sg = sup_norm_gradient(next->w);
        if (sg > sup_limit_) {
            std::ostringstream msg;
            msg << "sup|grad w| = " << sg << " exceeded " << sup_limit_;
            return Halt{RunStatus::sup_gradient_exceeded, std::move(*next), sg, msg.str()};
        }
        if (next->w.max_abs() > control_.field_limit) {
            std::ostringstream msg;
            msg << "max|w| exceeded " << control_.field_limit;
            return Halt{RunStatus::field_magnitude_exceeded, std::move(*next), sg, msg.str()};
        }
        return std::pair{std::move(*next), sg};
    }

    long halvings = 0;

private:
    const OperatorContext& ctx_;
    const StepControl& control_;
    double sup_limit_;
};

void notify(const std::vector<Observer>& observers, const SimState& s, const StepInfo& info) {
    for (const auto& obs : observers) {
        try {
            obs(s, info);
        } catch (const std::exception& e) {
            std::ostringstream msg;
            msg << "observer failed at step " << s.step_index << " (t=" << s.t << "): " << e.what();
            throw std::runtime_error(msg.str());
        }
    }
}

} // namespace

RunOutcome run(const OperatorContext& ctx, SimState state, const StepControl& control,
               const std::vector<Observer>& observers, SimState* final_state) {
    control.validate();
    if (!(state.w.grid() == ctx.grid())) throw std::invalid_argument("run: initial state is not on the context grid");
    if (!state.all_finite()) throw NumericalError("run: initial state is not finite");

    RunOutcome out;
    out.sup_grad_initial = sup_norm_gradient(state.w);
    // With phi = 0 the factor applies to sup|grad psi| (one time unit of drift);
    // zero data never moves, so it gets no threshold.
    double reference = out.sup_grad_initial;
    if (reference == 0.0) reference = sup_norm_gradient(state.v);
    out.sup_grad_limit = control.sup_grad_limit.value_or(
        reference > 0.0 ? control.sup_grad_factor * reference : std::numeric_limits<double>::infinity());
    out.sup_grad_final = out.sup_grad_initial;
    notify(observers, state, {out.sup_grad_initial, 0.0});

    Driver driver(ctx, control, out.sup_grad_limit);
    const double t_start = state.t;
    const double t_end = control.t_end;
    long n = 0;
    while (state.t < t_end) {
        if (n >= control.max_steps) {
            out.status = RunStatus::max_steps;
            out.message = "step budget exhausted";
            break;
        }
        double t_next = t_start + static_cast<double>(n + 1) * control.dt;
        if (t_next > t_end || t_end - t_next < 1e-9 * control.dt) t_next = t_end;
        const double h = t_next - state.t;
        auto result = driver.advance(state, h, 0);
        ++n;
        out.halvings = driver.halvings;
        if (auto* halt = std::get_if<Halt>(&result)) {
            // A halt inside a halved sub-step keeps its own time.
            if (std::abs(halt->state.t - t_next) <= 1e-9 * h) halt->state.t = t_next;
            halt->state.step_index = state.step_index + 1;
            out.status = halt->status;
            out.t_final = halt->state.t;
            out.steps = n;
            out.message = halt->message;
            if (halt->status != RunStatus::non_finite) {
                out.sup_grad_final = halt->sup_grad;
                notify(observers, halt->state, {halt->sup_grad, h});
            }
            if (final_state) *final_state = std::move(halt->state);
            return out;
        }
        auto& [next, sg] = std::get<0>(result);
        next.t = t_next;
        next.step_index = state.step_index + 1;
        state = std::move(next);
        out.sup_grad_final = sg;
        notify(observers, state, {sg, h});
    }
    out.t_final = state.t;
    out.steps = n;
    if (final_state) *final_state = std::move(state);
    return out;
}

} // namespace nlshear
