#include "nlshear/diagnostics.hpp"

#include "nlshear/spectral_ops.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace nlshear {

LevineConfig LevineConfig::make(double nu, double E0, double pairing0, std::optional<double> b,
                                std::optional<double> t0) {
    if (!(nu > 0.0)) throw std::invalid_argument("levine: nu must be positive");
    LevineConfig cfg;
    cfg.nu = nu;
    cfg.admissible = E0 < 0.0;
    if (b) {
        if (!(*b > 0.0)) throw std::invalid_argument("levine: b must be positive");
        if (E0 < 0.0 && *b > -2.0 * E0) {
            std::ostringstream msg;
            msg << "levine: b = " << *b << " exceeds -2 E(0) = " << -2.0 * E0;
            throw std::invalid_argument(msg.str());
        }
        cfg.b = *b;
    } else {
        cfg.b = E0 < 0.0 ? -2.0 * E0 : 1.0;
        cfg.b_auto = true;
    }
    if (t0) {
        if (!(*t0 > 0.0)) throw std::invalid_argument("levine: t0 must be positive");
        cfg.t0 = *t0;
        while (!(pairing0 + cfg.b * cfg.t0 > 0.0)) {
            cfg.t0 *= 2.0;
            cfg.t0_raised = true;
        }
    } else {
        cfg.t0 = std::max(1.0, (1.0 + std::abs(pairing0)) / cfg.b);
        cfg.t0_auto = true;
    }
    return cfg;
}

double LevineValues::concavity_residual() const { return Hdoubleprime * H - (1.0 + nu) * Hprime * Hprime; }

EnergyParts energy_parts(const OperatorContext& ctx, const SimState& state) {
    EnergyParts parts;
    parts.kinetic = 0.5 * R_norm_squared(ctx, state.v, &parts.floor);
    const auto [wx, wy] = gradient(state.w);
    auto a = wx.values();
    auto b = wy.values();
    double sum = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) sum += energy_density(ctx.energy(), a[n], b[n]);
    parts.potential = sum * ctx.grid().cell_area();
    return parts;
}

double energy(const OperatorContext& ctx, const SimState& state) { return energy_parts(ctx, state).total(); }

double pairing_identity(const OperatorContext& ctx, const SpectralField& w) {
    const auto [wx, wy] = gradient(w);
    auto a = wx.values();
    auto b = wy.values();
    double sum = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) sum += gradient_dot_stress(ctx.energy(), a[n], b[n]);
    return -sum * ctx.grid().cell_area();
}

LevineValues levine_H(const OperatorContext& ctx, const SimState& state, const LevineConfig& cfg,
                      FloorTelemetry* telemetry) {
    FloorTelemetry t_ww, t_vw, t_vv;
    const double Rw2 = R_norm_squared(ctx, state.w, &t_ww);
    const double Rvw = R_inner_product(ctx, state.v, state.w, &t_vw);
    const double Rv2 = R_norm_squared(ctx, state.v, &t_vv);
    const double tau = state.t + cfg.t0;
    LevineValues out;
    out.nu = cfg.nu;
    out.H = Rw2 + cfg.b * tau * tau;
    out.Hprime = 2.0 * Rvw + 2.0 * cfg.b * tau;
    out.Hdoubleprime = 2.0 * Rv2 + 2.0 * pairing_identity(ctx, state.w) + 2.0 * cfg.b;
    if (telemetry) {
        *telemetry = t_ww;
        for (const auto* t : {&t_vw, &t_vv}) {
            telemetry->skipped_modes = std::max(telemetry->skipped_modes, t->skipped_modes);
            telemetry->capped_modes = std::max(telemetry->capped_modes, t->capped_modes);
            telemetry->skipped_energy_fraction =
                std::max(telemetry->skipped_energy_fraction, t->skipped_energy_fraction);
            telemetry->warning = telemetry->warning || t->warning;
        }
    }
    return out;
}

double levine_bound(double nu, double H0, double Hprime0) {
    if (!(H0 > 0.0) || !(Hprime0 > 0.0) || !(nu > 0.0))
        throw std::invalid_argument("levine_bound: H(0), H'(0) and nu must be positive");
    return H0 / (nu * Hprime0);
}

double levine_bound(const LevineConfig& cfg, double H0, double Hprime0) { return levine_bound(cfg.nu, H0, Hprime0); }

const std::vector<std::string>& DiagnosticsRecord::column_names() {
    static const std::vector<std::string> names{"t",        "E",      "H",         "Hprime",
                                                "Hdoubleprime", "concavity_residual", "sup_grad", "l2_w",
                                                "sobolev_w", "sobolev_v", "skipped_mode_energy_fraction"};
    return names;
}

std::vector<double> DiagnosticsRecord::columns() const {
    return {t,        E,    H,         Hprime,    Hdoubleprime, concavity_residual,
            sup_grad, l2_w, sobolev_w, sobolev_v, skipped_mode_energy_fraction};
}

DiagnosticsRecord record(const OperatorContext& ctx, const SimState& state, const LevineConfig& cfg, double sobolev_s,
                         std::optional<double> sup_grad) {
    DiagnosticsRecord rec;
    rec.t = state.t;
    const EnergyParts e = energy_parts(ctx, state);
    rec.E = e.total();
    FloorTelemetry tel;
    const LevineValues lv = levine_H(ctx, state, cfg, &tel);
    rec.H = lv.H;
    rec.Hprime = lv.Hprime;
    rec.Hdoubleprime = lv.Hdoubleprime;
    rec.concavity_residual = lv.concavity_residual();
    rec.sup_grad = sup_grad ? *sup_grad : sup_norm_gradient(state.w);
    rec.l2_w = l2_norm(state.w);
    rec.sobolev_w = sobolev_norm(state.w, sobolev_s);
    rec.sobolev_v = sobolev_norm(state.v, sobolev_s);
    rec.skipped_mode_energy_fraction = std::max(e.floor.skipped_energy_fraction, tel.skipped_energy_fraction);
    return rec;
}

double energy_drift(const std::vector<DiagnosticsRecord>& series) {
    if (series.size() < 2) throw std::invalid_argument("energy_drift: need at least two records");
    const double E0 = series.front().E;
    double drift = 0.0;
    for (const auto& r : series) drift = std::max(drift, std::abs(r.E - E0));
    return drift / std::max(1.0, std::abs(E0));
}

void write_csv_header(std::ostream& out) {
    const auto& names = DiagnosticsRecord::column_names();
    for (std::size_t k = 0; k < names.size(); ++k) out << (k ? "," : "") << names[k];
    out << '\n';
}

void write_csv_row(std::ostream& out, const DiagnosticsRecord& rec) {
    char buf[40];
    const auto cols = rec.columns();
    for (std::size_t k = 0; k < cols.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g", cols[k]);
        out << (k ? "," : "") << buf;
    }
    out << '\n';
}

std::vector<DiagnosticsRecord> read_csv(std::istream& in) {
    std::vector<DiagnosticsRecord> out;
    std::string line;
    if (!std::getline(in, line)) return out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> v;
        std::stringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ',')) v.push_back(std::stod(cell));
        if (v.size() != DiagnosticsRecord::column_names().size())
            throw std::runtime_error("diagnostics csv: wrong column count");
        DiagnosticsRecord r;
        r.t = v[0];
        r.E = v[1];
        r.H = v[2];
        r.Hprime = v[3];
        r.Hdoubleprime = v[4];
        r.concavity_residual = v[5];
        r.sup_grad = v[6];
        r.l2_w = v[7];
        r.sobolev_w = v[8];
        r.sobolev_v = v[9];
        r.skipped_mode_energy_fraction = v[10];
        out.push_back(r);
    }
    return out;
}

} // namespace nlshear
