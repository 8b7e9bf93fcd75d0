// integrator.hpp
//
// Fixed-step time stepping of the first-order system
//     w_t = v,   v_t = K w.
// A run halts when the sup-norm of |grad w| passes its threshold, the
// displacement grows beyond the field bound, values stop being finite, or
// the step budget runs out.

#ifndef NLSHEAR_INTEGRATOR_HPP
#define NLSHEAR_INTEGRATOR_HPP

#include "nlshear/nonlocal_operator.hpp"
#include "nlshear/spectral_field.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace nlshear {

struct SimState {
    SpectralField w;
    SpectralField v;
    double t = 0.0;
    long step_index = 0;

    SimState(SpectralField w_, SpectralField v_, double t_ = 0.0, long step = 0);
    bool all_finite() const { return w.all_finite() && v.all_finite(); }
};

enum class Scheme { rk4, leapfrog };

struct StepControl {
    double dt = 0.0;
    double t_end = 0.0;
    Scheme scheme = Scheme::rk4;
    long max_steps = 10'000'000;
    /// Halt once sup|grad w| exceeds sup_grad_factor times its initial value,
    /// or sup_grad_limit when that is set. When the initial gradient is zero
    /// the factor multiplies sup|grad v(0)| instead.
    double sup_grad_factor = 1e6;
    std::optional<double> sup_grad_limit;
    double field_limit = 1e100;
    /// On a non-finite step, retry it as two half steps, recursively, at most
    /// this many levels deep. 0 disables.
    int max_halvings = 0;

    /// Throws std::invalid_argument when dt, t_end or thresholds are invalid.
    void validate() const;
};

enum class RunStatus { completed, sup_gradient_exceeded, field_magnitude_exceeded, non_finite, max_steps };

std::string to_string(RunStatus s);
std::string to_string(Scheme s);

struct RunOutcome {
    RunStatus status = RunStatus::completed;
    double t_final = 0.0;   // time of the last accepted (or offending) state
    long steps = 0;
    long halvings = 0;      // half-step retries taken
    double sup_grad_initial = 0.0;
    double sup_grad_limit = 0.0;
    double sup_grad_final = 0.0;
    std::string message;
};

struct StepInfo {
    double sup_grad = 0.0;
    double dt = 0.0; // step just taken; 0 for the initial state
};

using Observer = std::function<void(const SimState&, const StepInfo&)>;

SimState step_rk4(const OperatorContext& ctx, const SimState& state, double dt);
SimState step_leapfrog(const OperatorContext& ctx, const SimState& state, double dt);
SimState step(const OperatorContext& ctx, const SimState& state, double dt, Scheme scheme);

/// Advances `initial` to control.t_end. Observers see the initial state,
/// every accepted state, and the finite state that triggers a threshold
/// halt (never a non-finite one). An observer
/// exception aborts the run with a std::runtime_error carrying the step.
RunOutcome run(const OperatorContext& ctx, SimState initial, const StepControl& control,
               const std::vector<Observer>& observers = {}, SimState* final_state = nullptr);

/// dt = 0.2 / max_xi |xi| sqrt(beta^(xi)).
double default_time_step(const KernelSymbol& kernel, const Grid2D& grid);

} // namespace nlshear

#endif
