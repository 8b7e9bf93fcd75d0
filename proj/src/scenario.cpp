#include "nlshear/scenario.hpp"

#include "nlshear/errors.hpp"
#include "nlshear/snapshot.hpp"
#include "nlshear/spectral_ops.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace nlshear {

using nlohmann::json;
using nlohmann::ordered_json;

bool Scenario::operator==(const Scenario& o) const {
    return schema_version == o.schema_version && name == o.name && grid == o.grid && kernel == o.kernel &&
           energy == o.energy && phi == o.phi && psi == o.psi && integrator == o.integrator && op == o.op &&
           levine == o.levine && checks == o.checks && output == o.output && strict == o.strict &&
           base_dir == o.base_dir;
}

namespace {

// Strict object reader: records type errors and, on finish(), unknown keys.
class Reader {
public:
    Reader(const json& node, std::string path, std::vector<std::string>& errors)
        : node_(node), path_(std::move(path)), errors_(errors) {
        if (!node_.is_object()) {
            errors_.push_back(where() + ": expected an object");
            ok_ = false;
        }
    }

    bool has(const std::string& key) const { return ok_ && node_.contains(key) && !node_.at(key).is_null(); }

    template <typename T>
    void get(const std::string& key, T& out) {
        seen_.insert(key);
        if (!has(key)) return;
        try {
            const json& v = node_.at(key);
            if constexpr (std::is_same_v<T, bool>) {
                if (!v.is_boolean()) throw std::runtime_error("expected a boolean");
            } else if constexpr (std::is_arithmetic_v<T>) {
                if (!v.is_number()) throw std::runtime_error("expected a number");
                if constexpr (std::is_integral_v<T>) {
                    const double d = v.get<double>();
                    if (d != std::floor(d)) throw std::runtime_error("expected an integer");
                }
            } else if constexpr (std::is_same_v<T, std::string>) {
                if (!v.is_string()) throw std::runtime_error("expected a string");
            }
            out = v.get<T>();
        } catch (const std::exception& e) {
            errors_.push_back(key_path(key) + ": " + e.what());
        }
    }

    template <typename T>
    void get(const std::string& key, std::optional<T>& out) {
        seen_.insert(key);
        if (!has(key)) return;
        T v{};
        const auto before = errors_.size();
        get(key, v);
        if (errors_.size() == before) out = v;
    }

    const json* child(const std::string& key) {
        seen_.insert(key);
        return has(key) ? &node_.at(key) : nullptr;
    }

    void finish() {
        if (!ok_) return;
        for (const auto& [k, v] : node_.items())
            if (!seen_.count(k)) errors_.push_back(key_path(k) + ": unknown key");
    }

    std::string key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    std::string where() const { return path_.empty() ? "<root>" : path_; }
    std::vector<std::string>& errors() { return errors_; }

private:
    const json& node_;
    std::string path_;
    std::vector<std::string>& errors_;
    std::set<std::string> seen_;
    bool ok_ = true;
};

void require(bool cond, std::vector<std::string>& errors, const std::string& msg) {
    if (!cond) errors.push_back(msg);
}

EnergySpec parse_energy(const json& node, const std::string& path, std::vector<std::string>& errors,
                        bool isotropic_only) {
    Reader r(node, path, errors);
    EnergySpec e;
    r.get("name", e.name);
    if (e.name == "powerlaw") {
        r.get("a", e.a);
        r.get("q", e.q);
        require(std::isfinite(e.a), errors, r.key_path("a") + ": must be finite");
        require(e.q > 0.0 && std::isfinite(e.q), errors, r.key_path("q") + ": must be positive");
    } else if (e.name == "linear_plus") {
        if (const json* g = r.child("G"))
            e.inner.push_back(parse_energy(*g, r.key_path("G"), errors, true));
        else
            errors.push_back(r.key_path("G") + ": required for linear_plus");
    } else if (e.name == "anisotropic" && !isotropic_only) {
        r.get("builtin", e.builtin);
        if (e.builtin == "isotropic_reduction") {
            if (const json* of = r.child("of"))
                e.inner.push_back(parse_energy(*of, r.key_path("of"), errors, true));
            else
                errors.push_back(r.key_path("of") + ": required for isotropic_reduction");
        } else if (e.builtin == "quartic") {
            r.get("sign", e.sign);
        } else if (e.builtin != "p2q") {
            errors.push_back(r.key_path("builtin") + ": unknown anisotropic energy '" + e.builtin + "'");
        }
    } else {
        errors.push_back(r.key_path("name") + ": unknown energy '" + e.name + "'" +
                         (isotropic_only ? " (isotropic energy required here)" : ""));
    }
    r.finish();
    return e;
}

InitialSpec parse_initial(const json& node, const std::string& path, std::vector<std::string>& errors, bool is_psi) {
    Reader r(node, path, errors);
    InitialSpec s;
    r.get("kind", s.kind);
    if (s.kind == "zero") {
    } else if (s.kind == "gaussian_bump") {
        r.get("amplitude", s.amplitude);
        r.get("sigma", s.sigma);
        r.get("center", s.center);
        require(s.sigma > 0.0, errors, r.key_path("sigma") + ": must be positive");
    } else if (s.kind == "mode") {
        r.get("amplitude", s.amplitude);
        r.get("index", s.index);
    } else if (s.kind == "ring") {
        r.get("amplitude", s.amplitude);
        r.get("radius", s.radius);
        r.get("width", s.width);
        r.get("center", s.center);
        require(s.width > 0.0, errors, r.key_path("width") + ": must be positive");
        require(s.radius >= 0.0, errors, r.key_path("radius") + ": must be nonnegative");
    } else if (s.kind == "file") {
        r.get("path", s.path);
        require(!s.path.empty(), errors, r.key_path("path") + ": required for kind file");
    } else if (s.kind == "proportional" && is_psi) {
        r.get("factor", s.factor);
    } else {
        errors.push_back(r.key_path("kind") + ": unknown initial data kind '" + s.kind + "'");
    }
    r.finish();
    return s;
}

ordered_json energy_to_json(const EnergySpec& e) {
    ordered_json j{{"name", e.name}};
    if (e.name == "powerlaw") {
        j["a"] = e.a;
        j["q"] = e.q;
    } else if (e.name == "linear_plus") {
        j["G"] = energy_to_json(e.inner.at(0));
    } else {
        j["builtin"] = e.builtin;
        if (e.builtin == "isotropic_reduction") j["of"] = energy_to_json(e.inner.at(0));
        if (e.builtin == "quartic") j["sign"] = e.sign;
    }
    return j;
}

ordered_json initial_to_json(const InitialSpec& s) {
    ordered_json j{{"kind", s.kind}};
    if (s.kind == "gaussian_bump") {
        j["amplitude"] = s.amplitude;
        j["sigma"] = s.sigma;
        j["center"] = s.center;
    } else if (s.kind == "mode") {
        j["amplitude"] = s.amplitude;
        j["index"] = s.index;
    } else if (s.kind == "ring") {
        j["amplitude"] = s.amplitude;
        j["radius"] = s.radius;
        j["width"] = s.width;
        j["center"] = s.center;
    } else if (s.kind == "file") {
        j["path"] = s.path;
    } else if (s.kind == "proportional") {
        j["factor"] = s.factor;
    }
    return j;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    return path.is_relative() && !base.empty() ? base / path : path;
}

} // namespace

Scenario scenario_from_json(const json& doc, const std::filesystem::path& base_dir) {
    std::vector<std::string> errors;
    Scenario s;
    s.base_dir = base_dir;
    Reader root(doc, "", errors);
    root.get("schema_version", s.schema_version);
    if (!root.has("schema_version")) errors.push_back("schema_version: required");
    else if (s.schema_version != kSchemaVersion)
        errors.push_back("schema_version: unsupported version " + std::to_string(s.schema_version));
    root.get("name", s.name);
    root.get("strict", s.strict);

    if (const json* g = root.child("grid")) {
        Reader r(*g, "grid", errors);
        r.get("nx", s.grid.nx);
        r.get("ny", s.grid.ny);
        r.get("lx", s.grid.lx);
        r.get("ly", s.grid.ly);
        r.finish();
    }
    try {
        Grid2D(s.grid.nx, s.grid.ny, s.grid.lx, s.grid.ly);
    } catch (const std::exception& e) {
        errors.push_back(std::string("grid: ") + e.what());
    }

    if (const json* k = root.child("kernel")) {
        Reader r(*k, "kernel", errors);
        r.get("name", s.kernel.name);
        if (s.kernel.name == "bi_helmholtz") {
            r.get("c1", s.kernel.c1);
            r.get("c2", s.kernel.c2);
        } else if (s.kernel.name == "gaussian") {
            r.get("effective_r", s.kernel.effective_r);
        } else if (s.kernel.name == "tabulated") {
            r.get("file", s.kernel.file);
            r.get("r", s.kernel.r);
            r.get("C", s.kernel.C);
            require(!s.kernel.file.empty(), errors, "kernel.file: required for tabulated kernels");
            require(s.kernel.r >= 2.0, errors, "kernel.r: must be >= 2");
            require(s.kernel.C > 0.0, errors, "kernel.C: must be positive");
        } else if (s.kernel.name != "bessel_k0" && s.kernel.name != "dirac") {
            errors.push_back("kernel.name: unknown kernel '" + s.kernel.name + "'");
        }
        r.finish();
    }
    if (s.kernel.name == "bi_helmholtz" || s.kernel.name == "gaussian") {
        try {
            if (s.kernel.name == "bi_helmholtz") bi_helmholtz(s.kernel.c1, s.kernel.c2);
            else gaussian(s.kernel.effective_r);
        } catch (const std::exception& e) {
            errors.push_back(std::string("kernel: ") + e.what());
        }
    }

    if (const json* e = root.child("energy")) s.energy = parse_energy(*e, "energy", errors, false);

    if (const json* init = root.child("initial")) {
        Reader r(*init, "initial", errors);
        if (const json* phi = r.child("phi")) s.phi = parse_initial(*phi, "initial.phi", errors, false);
        if (const json* psi = r.child("psi")) s.psi = parse_initial(*psi, "initial.psi", errors, true);
        r.finish();
    }

    if (const json* it = root.child("integrator")) {
        Reader r(*it, "integrator", errors);
        r.get("scheme", s.integrator.scheme);
        r.get("dt", s.integrator.dt);
        r.get("t_end", s.integrator.t_end);
        r.get("max_steps", s.integrator.max_steps);
        r.get("sup_grad_factor", s.integrator.sup_grad_factor);
        r.get("sup_grad_limit", s.integrator.sup_grad_limit);
        r.get("field_limit", s.integrator.field_limit);
        r.get("max_halvings", s.integrator.max_halvings);
        r.finish();
    }
    {
        const auto& it = s.integrator;
        require(it.scheme == "rk4" || it.scheme == "leapfrog", errors,
                "integrator.scheme: unknown scheme '" + it.scheme + "'");
        require(it.t_end > 0.0, errors, "integrator.t_end: must be positive");
        require(!it.dt || (*it.dt > 0.0 && *it.dt <= it.t_end), errors, "integrator.dt: must lie in (0, t_end]");
        require(it.max_steps > 0, errors, "integrator.max_steps: must be positive");
        require(it.sup_grad_factor > 0.0, errors, "integrator.sup_grad_factor: must be positive");
        require(!it.sup_grad_limit || *it.sup_grad_limit > 0.0, errors, "integrator.sup_grad_limit: must be positive");
        require(it.field_limit > 0.0, errors, "integrator.field_limit: must be positive");
        require(it.max_halvings >= 0 && it.max_halvings <= 40, errors, "integrator.max_halvings: must lie in [0, 40]");
    }

    if (const json* o = root.child("operator")) {
        Reader r(*o, "operator", errors);
        r.get("dealias", s.op.dealias);
        r.get("epsilon_floor", s.op.epsilon_floor);
        r.get("floor_mode", s.op.floor_mode);
        r.get("imag_tolerance", s.op.imag_tolerance);
        r.finish();
    }
    require(s.op.epsilon_floor > 0.0 && s.op.epsilon_floor < 1.0, errors, "operator.epsilon_floor: must lie in (0, 1)");
    require(s.op.floor_mode == "skip" || s.op.floor_mode == "cap", errors,
            "operator.floor_mode: must be 'skip' or 'cap'");
    require(s.op.imag_tolerance > 0.0, errors, "operator.imag_tolerance: must be positive");

    if (const json* l = root.child("levine")) {
        Reader r(*l, "levine", errors);
        LevineSpec spec;
        r.get("nu", spec.nu);
        r.get("b", spec.b);
        r.get("t0", spec.t0);
        r.finish();
        require(spec.nu > 0.0, errors, "levine.nu: must be positive");
        require(!spec.b || *spec.b > 0.0, errors, "levine.b: must be positive");
        require(!spec.t0 || *spec.t0 > 0.0, errors, "levine.t0: must be positive");
        s.levine = spec;
    }

    if (const json* c = root.child("checks")) {
        Reader r(*c, "checks", errors);
        r.get("k", s.checks.k);
        r.get("nu", s.checks.nu);
        r.get("u_max", s.checks.u_max);
        r.get("n_samples", s.checks.n_samples);
        r.finish();
    }
    require(!s.checks.k || *s.checks.k > 0.0, errors, "checks.k: must be positive");
    require(!s.checks.nu || *s.checks.nu > 0.0, errors, "checks.nu: must be positive");
    require(s.checks.u_max > 0.0, errors, "checks.u_max: must be positive");
    require(s.checks.n_samples >= 100, errors, "checks.n_samples: must be >= 100");

    if (const json* o = root.child("output")) {
        Reader r(*o, "output", errors);
        r.get("diagnostics_every", s.output.diagnostics_every);
        r.get("snapshot_every", s.output.snapshot_every);
        r.get("sobolev_s", s.output.sobolev_s);
        r.finish();
    }
    require(s.output.diagnostics_every >= 1, errors, "output.diagnostics_every: must be >= 1");
    require(s.output.snapshot_every >= 0, errors, "output.snapshot_every: must be >= 0");
    require(std::isfinite(s.output.sobolev_s), errors, "output.sobolev_s: must be finite");

    root.finish();

    if (!errors.empty()) {
        std::ostringstream msg;
        msg << "invalid scenario (" << errors.size() << " problem" << (errors.size() > 1 ? "s" : "") << "):";
        for (const auto& e : errors) msg << "\n  - " << e;
        throw ConfigError(msg.str());
    }
    return s;
}

ordered_json scenario_to_json(const Scenario& s) {
    ordered_json j;
    j["schema_version"] = s.schema_version;
    j["name"] = s.name;
    j["grid"] = {{"nx", s.grid.nx}, {"ny", s.grid.ny}, {"lx", s.grid.lx}, {"ly", s.grid.ly}};
    ordered_json k{{"name", s.kernel.name}};
    if (s.kernel.name == "bi_helmholtz") {
        k["c1"] = s.kernel.c1;
        k["c2"] = s.kernel.c2;
    } else if (s.kernel.name == "gaussian") {
        k["effective_r"] = s.kernel.effective_r;
    } else if (s.kernel.name == "tabulated") {
        k["file"] = s.kernel.file;
        k["r"] = s.kernel.r;
        k["C"] = s.kernel.C;
    }
    j["kernel"] = k;
    j["energy"] = energy_to_json(s.energy);
    j["initial"] = {{"phi", initial_to_json(s.phi)}, {"psi", initial_to_json(s.psi)}};
    ordered_json it{{"scheme", s.integrator.scheme}};
    if (s.integrator.dt) it["dt"] = *s.integrator.dt;
    it["t_end"] = s.integrator.t_end;
    it["max_steps"] = s.integrator.max_steps;
    it["sup_grad_factor"] = s.integrator.sup_grad_factor;
    if (s.integrator.sup_grad_limit) it["sup_grad_limit"] = *s.integrator.sup_grad_limit;
    it["field_limit"] = s.integrator.field_limit;
    it["max_halvings"] = s.integrator.max_halvings;
    j["integrator"] = it;
    j["operator"] = {{"dealias", s.op.dealias},
                     {"epsilon_floor", s.op.epsilon_floor},
                     {"floor_mode", s.op.floor_mode},
                     {"imag_tolerance", s.op.imag_tolerance}};
    if (s.levine) {
        ordered_json l{{"nu", s.levine->nu}};
        if (s.levine->b) l["b"] = *s.levine->b;
        if (s.levine->t0) l["t0"] = *s.levine->t0;
        j["levine"] = l;
    }
    ordered_json c;
    if (s.checks.k) c["k"] = *s.checks.k;
    if (s.checks.nu) c["nu"] = *s.checks.nu;
    c["u_max"] = s.checks.u_max;
    c["n_samples"] = s.checks.n_samples;
    j["checks"] = c;
    j["output"] = {{"diagnostics_every", s.output.diagnostics_every},
                   {"snapshot_every", s.output.snapshot_every},
                   {"sobolev_s", s.output.sobolev_s}};
    j["strict"] = s.strict;
    return j;
}

void apply_overrides(json& doc, const std::vector<std::string>& overrides) {
    for (const auto& o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + o + "': expected path=value");
        const std::string path = o.substr(0, eq);
        const std::string text = o.substr(eq + 1);
        json value;
        try {
            value = json::parse(text);
        } catch (const json::parse_error&) {
            value = text;
        }
        json* node = &doc;
        std::stringstream parts(path);
        std::string key;
        std::vector<std::string> keys;
        while (std::getline(parts, key, '.')) keys.push_back(key);
        for (std::size_t n = 0; n < keys.size(); ++n) {
            if (keys[n].empty()) throw ConfigError("override '" + o + "': empty path segment");
            if (!node->is_object()) {
                if (!node->is_null()) throw ConfigError("override '" + o + "': '" + keys[n - 1] + "' is not an object");
                *node = json::object();
            }
            node = &(*node)[keys[n]];
        }
        *node = value;
    }
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

Scenario load_scenario(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
    json doc = read_json_file(path);
    apply_overrides(doc, overrides);
    return scenario_from_json(doc, path.parent_path());
}

Grid2D make_grid(const Scenario& s) { return Grid2D(s.grid.nx, s.grid.ny, s.grid.lx, s.grid.ly); }

KernelSymbol make_kernel(const KernelSpec& spec, const Grid2D& grid, const std::filesystem::path& base_dir) {
    if (spec.name == "gaussian") return gaussian(spec.effective_r);
    if (spec.name == "bessel_k0") return bessel_k0();
    if (spec.name == "bi_helmholtz") return bi_helmholtz(spec.c1, spec.c2);
    if (spec.name == "dirac") return dirac();
    if (spec.name == "tabulated") {
        KernelSymbol k = tabulated(resolve(base_dir, spec.file).string(), grid, spec.r, spec.C);
        const DecayReport rep = validate_decay(k, grid);
        if (!rep.pass()) {
            std::ostringstream msg;
            msg << "tabulated kernel " << spec.file << " fails the decay check: min symbol " << rep.min_symbol
                << ", empirical C " << rep.empirical_C << " vs declared " << spec.C << " at r = " << spec.r;
            throw ConfigError(msg.str());
        }
        return k;
    }
    throw ConfigError("unknown kernel '" + spec.name + "'");
}

IsotropicEnergy make_isotropic_energy(const EnergySpec& spec) {
    if (spec.name == "powerlaw") return IsotropicEnergy::power_law(spec.a, spec.q);
    if (spec.name == "linear_plus") return IsotropicEnergy::linear_plus(make_isotropic_energy(spec.inner.at(0)));
    throw ConfigError("energy '" + spec.name + "' is not isotropic");
}

Energy make_energy(const EnergySpec& spec) {
    if (spec.name != "anisotropic") return make_isotropic_energy(spec);
    if (spec.builtin == "isotropic_reduction")
        return AnisotropicEnergy::from_isotropic(make_isotropic_energy(spec.inner.at(0)));
    if (spec.builtin == "quartic") return quartic_anisotropic(spec.sign);
    if (spec.builtin == "p2q") return p2q_anisotropic();
    throw ConfigError("unknown anisotropic energy '" + spec.builtin + "'");
}

OperatorOptions make_operator_options(const Scenario& s) {
    OperatorOptions o;
    o.dealias = s.op.dealias;
    o.floor.epsilon_floor = s.op.epsilon_floor;
    o.floor.mode = s.op.floor_mode == "cap" ? FloorMode::cap : FloorMode::skip;
    o.imag_tolerance = s.op.imag_tolerance;
    o.strict = s.strict;
    return o;
}

OperatorContext make_context(const Scenario& s) {
    const Grid2D g = make_grid(s);
    return OperatorContext(g, make_kernel(s.kernel, g, s.base_dir), make_energy(s.energy), make_operator_options(s));
}

Scheme parse_scheme(const std::string& name) {
    if (name == "rk4") return Scheme::rk4;
    if (name == "leapfrog") return Scheme::leapfrog;
    throw ConfigError("unknown scheme '" + name + "'");
}

json builtin_scenario_json(const std::string& name) {
    if (name == "g1")
        return json::parse(R"({
            "schema_version": 1,
            "name": "g1",
            "grid": {"nx": 64, "ny": 64, "lx": 40, "ly": 40},
            "kernel": {"name": "bessel_k0"},
            "energy": {"name": "linear_plus", "G": {"name": "powerlaw", "a": 1, "q": 2}},
            "initial": {"phi": {"kind": "gaussian_bump", "amplitude": 0.1, "sigma": 2},
                        "psi": {"kind": "zero"}},
            "integrator": {"scheme": "rk4", "t_end": 10},
            "checks": {"k": 1}
        })");
    if (name == "b1")
        return json::parse(R"({
            "schema_version": 1,
            "name": "b1",
            "grid": {"nx": 64, "ny": 64, "lx": 40, "ly": 40},
            "kernel": {"name": "bessel_k0"},
            "energy": {"name": "powerlaw", "a": -1, "q": 2},
            "initial": {"phi": {"kind": "gaussian_bump", "amplitude": 1.5, "sigma": 2},
                        "psi": {"kind": "zero"}},
            "integrator": {"scheme": "rk4", "dt": 0.01, "t_end": 40, "max_halvings": 20},
            "levine": {"nu": 0.5},
            "checks": {"nu": 0.5}
        })");
    throw ConfigError("unknown built-in scenario '" + name + "'");
}

Scenario builtin_scenario(const std::string& name) { return scenario_from_json(builtin_scenario_json(name)); }

namespace {

SpectralField realize(const InitialSpec& spec, const Grid2D& g, const std::filesystem::path& base_dir) {
    const double A = spec.amplitude;
    if (spec.kind == "zero" || (A == 0.0 && spec.kind != "file")) return SpectralField(g);
    if (spec.kind == "gaussian_bump") {
        const double s2 = 2.0 * spec.sigma * spec.sigma;
        const auto [cx, cy] = spec.center;
        return SpectralField::from_function(g, [=](double x, double y) {
            return A * std::exp(-((x - cx) * (x - cx) + (y - cy) * (y - cy)) / s2);
        });
    }
    if (spec.kind == "ring") {
        const double w2 = 2.0 * spec.width * spec.width;
        const double R = spec.radius;
        const auto [cx, cy] = spec.center;
        return SpectralField::from_function(g, [=](double x, double y) {
            const double r = std::hypot(x - cx, y - cy);
            return A * std::exp(-(r - R) * (r - R) / w2);
        });
    }
    if (spec.kind == "mode") {
        const double kx = 2.0 * std::numbers::pi * spec.index[0] / g.lx();
        const double ky = 2.0 * std::numbers::pi * spec.index[1] / g.ly();
        return SpectralField::from_function(g, [=](double x, double y) { return A * std::cos(kx * x + ky * y); });
    }
    if (spec.kind == "file") {
        SnapshotMeta meta;
        SpectralField f = read_snapshot(resolve(base_dir, spec.path), &meta);
        if (!(f.grid() == g)) throw ConfigError("initial data file " + spec.path + " does not match the scenario grid");
        return f;
    }
    throw ConfigError("unknown initial data kind '" + spec.kind + "'");
}

} // namespace

InitialState build_initial_state(const Scenario& s, const Grid2D& grid) {
    SpectralField phi = realize(s.phi, grid, s.base_dir);
    SpectralField psi(grid);
    if (s.psi.kind == "proportional") {
        psi = phi;
        psi *= s.psi.factor;
    } else {
        psi = realize(s.psi, grid, s.base_dir);
    }
    InitialState out{SimState(phi, psi, 0.0, 0), 0.0, 0.0, {}};
    out.amplitude_max = std::max(phi.max_abs(), psi.max_abs());
    out.boundary_max = std::max(boundary_ring_max(phi), boundary_ring_max(psi));
    // Mode data is periodic by construction; the ring test does not apply.
    const bool periodic = s.phi.kind == "mode" || s.psi.kind == "mode";
    if (!periodic && out.boundary_max > kBoundaryDecay * out.amplitude_max) {
        std::ostringstream msg;
        msg << "initial data reaches " << out.boundary_max << " on the box boundary (peak " << out.amplitude_max
            << "); the periodic box truncates it";
        if (s.strict) throw ConfigError(msg.str());
        out.warnings.push_back(msg.str());
    }
    if (!out.state.all_finite()) throw ConfigError("initial data is not finite");
    return out;
}

} // namespace nlshear
