#include "stochrd/experiment.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "stochrd/cocycle.hpp"
#include "stochrd/errors.hpp"
#include "stochrd/semicontinuity.hpp"
#include "stochrd/solver.hpp"

namespace stochrd {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"model", {"lambda", "p", "alpha1", "alpha2", "alpha3", "growth_c", "delta", "nonlinearity",
                   "coefficient", "linear"}},
        {"forcing", {"family", "amplitude", "period", "depth", "profile", "width"}},
        {"grid", {"dim", "half_width", "points"}},
        {"initial", {"kind", "amplitude", "width"}},
        {"time", {"dt", "tau", "duration", "horizons", "method"}},
        {"noise", {"seed", "s_max", "path_step", "alpha", "alphas"}},
        {"attractor", {"members", "eps_att", "c_abs", "absorbing_window", "ball_factor", "period"}},
        {"certificate", {"c_cert"}},
        {"output", {"dir", "snapshot_every"}},
    };
    return keys;
}

class Reader {
public:
    explicit Reader(const boost::property_tree::ptree& tree) : tree_(tree) {}

    std::optional<std::string> raw(const std::string& section, const std::string& key) const {
        auto s = tree_.get_child_optional(section);
        if (!s) return std::nullopt;
        auto v = s->get_optional<std::string>(key);
        if (!v) return std::nullopt;
        return trim(*v);
    }

    void number(const std::string& section, const std::string& key, double& out) {
        if (auto v = raw(section, key)) {
            if (auto d = to_double(*v)) out = *d;
            else bad(section, key, "not a number: '" + *v + "'");
        }
    }

    void count(const std::string& section, const std::string& key, std::size_t& out) {
        if (auto v = raw(section, key)) {
            char* end = nullptr;
            const long long n = std::strtoll(v->c_str(), &end, 10);
            if (v->empty() || *end != '\0' || n < 0) bad(section, key, "not a nonnegative integer: '" + *v + "'");
            else out = static_cast<std::size_t>(n);
        }
    }

    void seed(const std::string& section, const std::string& key, std::uint64_t& out) {
        if (auto v = raw(section, key)) {
            char* end = nullptr;
            const unsigned long long n = std::strtoull(v->c_str(), &end, 10);
            if (v->empty() || *end != '\0' || v->front() == '-') bad(section, key, "not an unsigned integer: '" + *v + "'");
            else out = n;
        }
    }

    void list(const std::string& section, const std::string& key, std::vector<double>& out) {
        if (auto v = raw(section, key)) {
            std::vector<double> values;
            std::stringstream ss(*v);
            std::string item;
            bool ok = true;
            while (std::getline(ss, item, ',')) {
                if (auto d = to_double(trim(item))) values.push_back(*d);
                else ok = false;
            }
            if (!ok || values.empty()) bad(section, key, "not a comma-separated list of numbers: '" + *v + "'");
            else out = std::move(values);
        }
    }

    void text(const std::string& section, const std::string& key, std::string& out) {
        if (auto v = raw(section, key)) out = *v;
    }

    void bad(const std::string& section, const std::string& key, const std::string& why) {
        keys_.push_back(section + "." + key);
        messages_.push_back(section + "." + key + ": " + why);
    }

    void check(bool ok, const std::string& section, const std::string& key, const std::string& why) {
        if (!ok) bad(section, key, why);
    }

    const std::vector<std::string>& keys() const { return keys_; }
    const std::vector<std::string>& messages() const { return messages_; }

    static std::string trim(const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return "";
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    }

private:
    static std::optional<double> to_double(const std::string& s) {
        if (s.empty()) return std::nullopt;
        char* end = nullptr;
        const double d = std::strtod(s.c_str(), &end);
        if (*end != '\0' || !std::isfinite(d)) return std::nullopt;
        return d;
    }

    const boost::property_tree::ptree& tree_;
    std::vector<std::string> keys_;
    std::vector<std::string> messages_;
};

SpatialProfile parse_profile(Reader& r, const std::string& section) {
    std::string kind = "zero";
    double width = 1.0;
    r.text(section, "profile", kind);
    r.number(section, "width", width);
    if (kind == "zero") return {};
    if (kind == "gaussian") return SpatialProfile::gaussian(width);
    if (kind == "bump") return SpatialProfile::compact_bump(width);
    r.bad(section, "profile", "expected zero | gaussian | bump");
    return {};
}

bool increasing_positive(const std::vector<double>& xs) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0) || (i > 0 && !(xs[i] > xs[i - 1]))) return false;
    }
    return true;
}

bool on_step(double t, double step) {
    const double k = t / step;
    return std::abs(k - std::round(k)) <= 1e-9 * std::max(1.0, std::abs(k));
}

}  // namespace

ExperimentConfig parse_config(std::istream& is) {
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::ini_parser::read_ini(is, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.what(), {"<syntax>"});
    }
    Reader r(tree);
    for (const auto& [section, body] : tree) {
        auto it = schema().find(section);
        if (it == schema().end()) {
            if (body.empty()) r.bad("<top>", section, "key outside of a section");
            else r.bad(section, "*", "unknown section");
            continue;
        }
        for (const auto& [key, _] : body) {
            if (!it->second.count(key)) r.bad(section, key, "unknown key");
        }
    }

    ExperimentConfig c;
    ModelSpec& m = c.model;
    r.number("model", "lambda", m.lambda);
    r.number("model", "p", m.p);
    r.number("model", "alpha1", m.alpha1);
    r.number("model", "alpha2", m.alpha2);
    r.number("model", "alpha3", m.alpha3);
    r.number("model", "growth_c", m.growth_c);
    r.number("model", "delta", m.delta);
    std::string nonlinearity = "cubic";
    r.text("model", "nonlinearity", nonlinearity);
    if (nonlinearity == "cubic") m.f.family = NonlinearityFamily::cubic;
    else if (nonlinearity == "anti_cubic") m.f.family = NonlinearityFamily::anti_cubic;
    else if (nonlinearity == "zero") m.f.family = NonlinearityFamily::zero;
    else r.bad("model", "nonlinearity", "expected cubic | anti_cubic | zero");
    r.number("model", "coefficient", m.f.coefficient);
    r.number("model", "linear", m.f.linear);
    r.check(m.lambda > 0.0, "model", "lambda", "must be > 0");
    r.check(m.p >= 2.0, "model", "p", "must be >= 2");
    r.check(m.alpha1 > 0.0, "model", "alpha1", "must be > 0");
    r.check(m.alpha2 > 0.0, "model", "alpha2", "must be > 0");
    r.check(m.alpha3 >= 0.0, "model", "alpha3", "must be >= 0");
    r.check(m.growth_c > 0.0, "model", "growth_c", "must be > 0");
    r.check(m.delta >= 0.0 && m.delta < m.lambda, "model", "delta", "must lie in [0, lambda)");

    std::string family = "zero";
    double amplitude = 0.0, period = 2.0, depth = 0.5;
    r.text("forcing", "family", family);
    r.number("forcing", "amplitude", amplitude);
    r.number("forcing", "period", period);
    r.number("forcing", "depth", depth);
    const SpatialProfile profile = parse_profile(r, "forcing");
    if (family == "zero") m.g = ForcingSpec::zero();
    else if (family == "constant") m.g = ForcingSpec::constant(amplitude, profile);
    else if (family == "periodic") m.g = ForcingSpec::periodic(amplitude, period, depth, profile);
    else r.bad("forcing", "family", "expected zero | constant | periodic");
    r.check(period > 0.0, "forcing", "period", "must be > 0");

    double dim = 1.0, half_width = c.grid.half_width;
    std::size_t points = c.grid.points;
    r.number("grid", "dim", dim);
    r.number("grid", "half_width", half_width);
    r.count("grid", "points", points);
    r.check(dim == 1.0, "grid", "dim", "only 1 is supported");
    r.check(half_width > 0.0, "grid", "half_width", "must be > 0");
    r.check(points >= 3, "grid", "points", "must be >= 3");
    c.grid = Grid{1, half_width, points};

    std::string kind = "gaussian";
    r.text("initial", "kind", kind);
    if (kind == "zero") c.initial.kind = InitialCondition::Kind::zero;
    else if (kind == "gaussian") c.initial.kind = InitialCondition::Kind::gaussian;
    else if (kind == "bump") c.initial.kind = InitialCondition::Kind::bump;
    else if (kind == "modes") c.initial.kind = InitialCondition::Kind::modes;
    else r.bad("initial", "kind", "expected zero | gaussian | bump | modes");
    r.number("initial", "amplitude", c.initial.amplitude);
    r.number("initial", "width", c.initial.width);
    r.check(c.initial.width > 0.0, "initial", "width", "must be > 0");

    r.number("time", "dt", c.dt);
    r.number("time", "tau", c.tau);
    r.number("time", "duration", c.duration);
    r.list("time", "horizons", c.horizons);
    r.text("time", "method", c.method);
    r.check(c.dt > 0.0, "time", "dt", "must be > 0");
    r.check(c.duration > 0.0, "time", "duration", "must be > 0");
    r.check(increasing_positive(c.horizons), "time", "horizons", "must be positive and increasing");
    r.check(c.method == "transform" || c.method == "direct", "time", "method", "expected transform | direct");

    double alpha = 0.5;
    r.seed("noise", "seed", c.seed);
    r.number("noise", "s_max", c.s_max);
    r.number("noise", "path_step", c.path_step);
    r.number("noise", "alpha", alpha);
    r.list("noise", "alphas", c.alphas);
    r.check(c.s_max > 0.0, "noise", "s_max", "must be > 0");
    r.check(c.path_step > 0.0, "noise", "path_step", "must be > 0");
    r.check(alpha >= 0.0 && alpha <= 1.0, "noise", "alpha", "must lie in [0, 1]");
    bool alphas_ok = true;
    for (std::size_t i = 0; i < c.alphas.size(); ++i) {
        if (!(c.alphas[i] > 0.0 && c.alphas[i] <= 1.0) || (i > 0 && !(c.alphas[i] < c.alphas[i - 1]))) alphas_ok = false;
    }
    r.check(alphas_ok, "noise", "alphas", "must be decreasing in (0, 1]");
    m.alpha = alpha;
    if (c.path_step > 0.0 && c.dt > 0.0) {
        r.check(on_step(c.dt, c.path_step), "time", "dt", "must be a multiple of noise.path_step");
        r.check(on_step(c.tau, c.path_step), "time", "tau", "must lie on the path grid");
    }

    r.count("attractor", "members", c.members);
    r.number("attractor", "eps_att", c.eps_att);
    if (auto v = r.raw("attractor", "c_abs"); v && *v != "calibrate") {
        double value = 0.0;
        r.number("attractor", "c_abs", value);
        r.check(value > 0.0, "attractor", "c_abs", "must be > 0 or 'calibrate'");
        c.c_abs = value;
    }
    r.number("attractor", "absorbing_window", c.abs_S);
    r.number("attractor", "ball_factor", c.ball_factor);
    r.number("attractor", "period", c.period);
    r.check(c.members >= 1, "attractor", "members", "must be >= 1");
    r.check(c.eps_att > 0.0, "attractor", "eps_att", "must be > 0");
    r.check(c.abs_S > 0.0, "attractor", "absorbing_window", "must be > 0");
    r.check(c.ball_factor > 0.0, "attractor", "ball_factor", "must be > 0");
    r.check(c.period > 0.0, "attractor", "period", "must be > 0");

    r.number("certificate", "c_cert", c.c_cert);
    r.check(c.c_cert > 0.0, "certificate", "c_cert", "must be > 0");

    r.text("output", "dir", c.output_dir);
    r.count("output", "snapshot_every", c.snapshot_every);

    if (r.keys().empty()) {
        try {
            m.validate();
        } catch (const InvalidArgument& e) {
            r.bad("model", "*", e.what());
        }
    }
    if (!r.keys().empty()) {
        std::string what = "invalid config:";
        for (const auto& msg : r.messages()) what += "\n  " + msg;
        throw ConfigError(what, r.keys());
    }
    return c;
}

ExperimentConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string(), {"--config"});
    return parse_config(in);
}

namespace {

json profile_json(const SpatialProfile& p) {
    switch (p.kind) {
        case SpatialProfile::Kind::gaussian: return {{"kind", "gaussian"}, {"width", p.width}};
        case SpatialProfile::Kind::compact_bump: return {{"kind", "bump"}, {"width", p.width}};
        default: return {{"kind", "zero"}};
    }
}

json config_json(const ExperimentConfig& c) {
    const ModelSpec& m = c.model;
    json forcing = {{"family", static_cast<int>(m.g.family)},
                    {"amplitude", m.g.amplitude},
                    {"depth", m.g.depth},
                    {"profile", profile_json(m.g.profile)}};
    if (m.g.period) forcing["period"] = *m.g.period;
    json j = {
        {"model", {{"lambda", m.lambda}, {"alpha", m.alpha}, {"p", m.p}, {"alpha1", m.alpha1},
                   {"alpha2", m.alpha2}, {"alpha3", m.alpha3}, {"growth_c", m.growth_c},
                   {"delta", m.delta}, {"nonlinearity", static_cast<int>(m.f.family)},
                   {"coefficient", m.f.coefficient}, {"linear", m.f.linear}}},
        {"forcing", forcing},
        {"grid", {{"dim", c.grid.dim}, {"half_width", c.grid.half_width}, {"points", c.grid.points}}},
        {"initial", {{"kind", static_cast<int>(c.initial.kind)}, {"amplitude", c.initial.amplitude},
                     {"width", c.initial.width}}},
        {"time", {{"dt", c.dt}, {"tau", c.tau}, {"duration", c.duration}, {"horizons", c.horizons},
                  {"method", c.method}}},
        {"noise", {{"seed", c.seed}, {"s_max", c.s_max}, {"path_step", c.path_step}, {"alphas", c.alphas}}},
        {"attractor", {{"members", c.members}, {"eps_att", c.eps_att},
                       {"c_abs", c.c_abs ? json(*c.c_abs) : json("calibrate")},
                       {"absorbing_window", c.abs_S}, {"ball_factor", c.ball_factor},
                       {"period", c.period}}},
        {"certificate", {{"c_cert", c.c_cert}}},
        {"output", {{"snapshot_every", c.snapshot_every}}},
    };
    return j;
}

}  // namespace

std::string canonical_config(const ExperimentConfig& config) { return config_json(config).dump(); }

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    return h;
}

const std::vector<std::string>& experiment_commands() {
    static const std::vector<std::string> commands = {"simulate", "check-model", "certify",
                                                      "attractor", "periodicity", "sweep-alpha"};
    return commands;
}

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

Field initial_field(const ExperimentConfig& c) {
    const double a = c.initial.amplitude;
    const double w = c.initial.width;
    switch (c.initial.kind) {
        case InitialCondition::Kind::zero:
            return Field(c.grid);
        case InitialCondition::Kind::gaussian:
            return Field::from_function(c.grid, [&](double x) { return a * std::exp(-x * x / (w * w)); });
        case InitialCondition::Kind::bump:
            return Field::from_function(c.grid, SpatialProfile::compact_bump(w)) *= a;
        case InitialCondition::Kind::modes: {
            TemperedFamilySpec sampler;
            sampler.seed = c.seed;
            sampler.min_fraction = 1.0;
            return sampler.draw(c.grid, a, 0);
        }
    }
    return Field(c.grid);
}

AttractorConfig attractor_config(const ExperimentConfig& c) {
    AttractorConfig a;
    a.grid = c.grid;
    a.horizons = c.horizons;
    a.members = c.members;
    a.eps_att = c.eps_att;
    a.dt = c.dt;
    a.absorbing.S = c.abs_S;
    a.absorbing.step = c.path_step;
    return a;
}

double resolve_c_abs(const ExperimentConfig& c, const AttractorConfig& a, std::ostream& log) {
    if (c.c_abs) return *c.c_abs;
    CalibrationConfig cal;
    cal.path_step = c.path_step;
    cal.path_window = std::max(cal.path_window, cal.horizon + a.absorbing.S + 1.0);
    const double value = calibrate_c(c.model, a, cal);
    log << "calibrated c_abs = " << num(value) << '\n';
    return value;
}

TemperedFamilySpec ball_sampler(const ExperimentConfig& c) {
    TemperedFamilySpec s;
    s.kind = TemperedFamilySpec::Radius::absorbing_ball;
    s.value = c.ball_factor;
    s.seed = c.seed;
    return s;
}

json approx_json(const AttractorApprox& a) {
    json norms = json::array();
    for (const auto& e : a.endpoints) norms.push_back(std::sqrt(l2_squared(e)));
    return {{"tau", a.tau},           {"seed", a.seed},
            {"alpha", a.alpha},       {"horizons", a.horizons},
            {"members", a.members},   {"converged", a.converged},
            {"set_distances", a.set_distances},
            {"initial_radii", a.initial_radii},
            {"endpoint_count", a.endpoints.size()},
            {"endpoint_norms", norms}};
}

int run_simulate(const ExperimentConfig& c, const fs::path& out) {
    const WienerPath w = sample_two_sided_path(c.seed, c.s_max, c.path_step);
    SolveOptions options;
    options.snapshot_every = c.snapshot_every;
    const Field u0 = initial_field(c);
    const TrajectoryRecord rec =
        c.method == "direct" ? solve_u_direct(u0, c.tau, c.tau + c.duration, w, c.model, c.dt, options)
                             : solve_u_transform(u0, c.tau, c.tau + c.duration, w, c.model, c.dt, options);
    {
        auto os = open_out(out / "ledger.csv");
        os << "t,v_sq,grad_v_sq,z2_u_pp,z2,g_sq\n";
        for (const auto& e : rec.ledger) {
            os << num(e.t) << ',' << num(e.v_sq) << ',' << num(e.grad_v_sq) << ',' << num(e.z2_u_pp)
               << ',' << num(e.z2) << ',' << num(e.g_sq) << '\n';
        }
    }
    {
        auto os = open_out(out / "snapshots.csv");
        os << "t,l2,h1_semi,lp\n";
        for (const auto& s : rec.snapshots) {
            const Norms n = norms(s.u, c.model.p);
            os << num(s.t) << ',' << num(n.l2) << ',' << num(n.h1_semi) << ',' << num(n.lp) << '\n';
        }
    }
    {
        auto os = open_out(out / "final_u.csv");
        write_field_csv(os, rec.final_u);
    }
    {
        auto os = open_out(out / "final_u.bin");
        write_field_binary(os, rec.final_u);
    }
    const Norms n = norms(rec.final_u, c.model.p);
    write_json(out / "report.json", {{"command", "simulate"},
                                     {"method", c.method},
                                     {"pass", true},
                                     {"steps", rec.ledger.empty() ? 0 : rec.ledger.size() - 1},
                                     {"final", {{"l2", n.l2}, {"h1_semi", n.h1_semi}, {"lp", n.lp}}}});
    return kPass;
}

int run_check_model(const ExperimentConfig& c, const fs::path& out) {
    const CertificateReport structure = validate_dissipativity(c.model, SampleBox{}, 41);
    const CertificateReport forcing = check_g_tempered(
        c.model.g, c.model.delta, c.model.delta, {c.tau, c.tau - 5.0, c.tau - 10.0}, c.grid);
    const bool pass = structure.passed && forcing.passed;
    write_json(out / "report.json", {{"command", "check-model"},
                                     {"pass", pass},
                                     {"dissipativity", to_json(structure)},
                                     {"forcing", to_json(forcing)}});
    return pass ? kPass : kContractFailure;
}

int run_certify(const ExperimentConfig& c, const fs::path& out) {
    const WienerPath w = sample_two_sided_path(c.seed, c.s_max, c.path_step);
    const TrajectoryRecord rec =
        phi_trajectory({c.duration, c.tau, w, c.model.alpha, initial_field(c)}, c.model, c.dt);
    const CertificateReport energy = energy_certificate(rec, c.model, c.c_cert);
    const CertificateReport h1 = h1_certificate_all(rec, c.model, c.c_cert);
    const bool pass = energy.passed && h1.passed;
    write_json(out / "certificate.json",
               {{"command", "certify"}, {"pass", pass}, {"energy", to_json(energy)}, {"h1", to_json(h1)}});
    return pass ? kPass : kContractFailure;
}

int run_attractor(const ExperimentConfig& c, const fs::path& out, std::ostream& log) {
    AttractorConfig a = attractor_config(c);
    a.absorbing.c_abs = resolve_c_abs(c, a, log);
    const WienerPath w = sample_two_sided_path(c.seed, c.s_max, c.path_step);
    const AttractorApprox approx = pullback_ensemble(c.tau, w, c.model.alpha, c.model, a, ball_sampler(c));

    CertificateReport absorb;
    absorb.name = "absorption";
    const double radius = absorbing_radius(c.tau, w, c.model.alpha, c.model, c.grid, a.absorbing);
    double largest = 0.0;
    for (const auto& e : approx.endpoints) largest = std::max(largest, std::sqrt(l2_squared(e)));
    absorb.worst_margin = radius - largest;
    absorb.passed = absorb.worst_margin >= 0.0;
    absorb.location_t = c.tau;
    absorb.metrics["absorbing_radius"] = radius;
    absorb.metrics["max_endpoint_norm"] = largest;

    json meta = approx_json(approx);
    meta["c_abs"] = a.absorbing.c_abs;
    meta["absorption"] = to_json(absorb);
    const bool pass = approx.converged && absorb.passed;
    meta["pass"] = pass;
    write_json(out / "attractor.json", meta);
    {
        auto os = open_out(out / "attractor_endpoints.bin");
        for (const auto& e : approx.endpoints) write_field_binary(os, e);
    }
    {
        auto os = open_out(out / "distances.csv");
        os << "t_horizon,set_distance\n";
        for (std::size_t i = 0; i < approx.set_distances.size(); ++i) {
            os << num(approx.horizons[i + 1]) << ',' << num(approx.set_distances[i]) << '\n';
        }
    }
    return pass ? kPass : kContractFailure;
}

int run_periodicity(const ExperimentConfig& c, const fs::path& out, std::ostream& log) {
    AttractorConfig a = attractor_config(c);
    a.absorbing.c_abs = resolve_c_abs(c, a, log);
    const WienerPath w = sample_two_sided_path(c.seed, c.s_max, c.path_step);
    const double d = attractor_periodicity_check(c.tau, c.period, w, c.model.alpha, c.model, a, ball_sampler(c));
    const double threshold = 2.0 * c.eps_att;
    const bool pass = d <= threshold;
    write_json(out / "periodicity.json", {{"command", "periodicity"},
                                          {"pass", pass},
                                          {"period", c.period},
                                          {"tau", c.tau},
                                          {"alpha", c.model.alpha},
                                          {"seed", c.seed},
                                          {"distance", d},
                                          {"threshold", threshold}});
    return pass ? kPass : kContractFailure;
}

int run_sweep(const ExperimentConfig& c, const fs::path& out, std::ostream& log) {
    AttractorConfig a = attractor_config(c);
    a.absorbing.c_abs = resolve_c_abs(c, a, log);
    SweepOptions options;
    options.path_step = c.path_step;
    options.path_window = std::max(c.s_max, required_path_window(c.tau, a));
    const SweepResult result = sweep_alpha(c.tau, c.seed, c.alphas, c.model, a, ball_sampler(c), options);
    {
        auto os = open_out(out / "sweep.csv");
        write_sweep_csv(os, result);
    }
    json rows = json::array();
    for (const auto& row : result.rows) {
        rows.push_back({{"alpha", row.alpha},
                        {"dist", row.dist},
                        {"absorbing_radius", row.absorbing_radius},
                        {"max_tail", row.max_tail},
                        {"converged", row.converged}});
    }
    write_json(out / "sweep.json", {{"command", "sweep-alpha"},
                                    {"pass", result.contract.passed},
                                    {"seeds", {result.seed}},
                                    {"tau", result.tau},
                                    {"eps_semi", result.eps_semi},
                                    {"c_abs", a.absorbing.c_abs},
                                    {"rows", rows},
                                    {"contract", to_json(result.contract)}});
    return result.contract.passed ? kPass : kContractFailure;
}

}  // namespace

void write_sweep_csv(std::ostream& os, const SweepResult& result) {
    os << "alpha,dist,absorbing_radius,max_tail,converged\n";
    for (const auto& row : result.rows) {
        os << num(row.alpha) << ',' << num(row.dist) << ',' << num(row.absorbing_radius) << ','
           << num(row.max_tail) << ',' << (row.converged ? 1 : 0) << '\n';
    }
}

int execute(const std::string& command, const ExperimentConfig& config, const fs::path& out,
            std::ostream& log) {
    const auto& commands = experiment_commands();
    if (std::find(commands.begin(), commands.end(), command) == commands.end()) {
        log << "unknown command '" << command << "'\n";
        return kUsageError;
    }
    fs::create_directories(out);
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(canonical_config(config))));
    write_json(out / "manifest.json", {{"command", command},
                                       {"config_hash", hash},
                                       {"seed", config.seed},
                                       {"version", kVersion}});
    auto fail = [&](const std::string& kind, const std::string& message, std::optional<double> t) {
        json j = {{"command", command}, {"error", kind}, {"message", message}};
        j["t"] = t ? json(*t) : json(nullptr);
        write_json(out / "error.json", j);
        log << kind << ": " << message << '\n';
    };
    try {
        if (command == "simulate") return run_simulate(config, out);
        if (command == "check-model") return run_check_model(config, out);
        if (command == "certify") return run_certify(config, out);
        if (command == "attractor") return run_attractor(config, out, log);
        if (command == "periodicity") return run_periodicity(config, out, log);
        return run_sweep(config, out, log);
    } catch (const DivergenceError& e) {
        fail("divergence", e.what(), e.time());
        return kContractFailure;
    } catch (const CalibrationFailure& e) {
        fail("calibration-failure", e.what(), std::nullopt);
        return kContractFailure;
    } catch (const WindowExceeded& e) {
        fail("window-exceeded", e.what(), std::nullopt);
        return kUsageError;
    } catch (const InvalidArgument& e) {
        fail("invalid-argument", e.what(), std::nullopt);
        return kUsageError;
    }
}

}  // namespace stochrd
