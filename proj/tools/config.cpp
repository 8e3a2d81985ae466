#include "config.hpp"

#include "aafix/path_csv.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace aafix::cli {

namespace pt = boost::property_tree;

namespace {

const std::set<std::string> kKernelKeys{"family", "orientation", "coeff", "rate", "wx", "wy",
                                        "map", "bias", "amp", "freq", "radius"};

std::set<std::string> split_kernel_keys() {
    std::set<std::string> k = kKernelKeys;
    k.insert({"ergodic_coeff", "ergodic_decay", "ergodic_bias"});
    return k;
}

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> s{
        {"problem", {"name", "variant", "dim", "t_min", "t_max", "step", "quad_tol", "constants_tol", "slack",
                     "sup_points", "delay_tau", "warps_declared_aa", "a0", "a1", "a2"}},
        {"f", {"family", "a", "b", "forcing", "amplitude", "frequency", "phase", "decay", "component", "curve"}},
        {"c1", kKernelKeys},
        {"c2", kKernelKeys},
        {"b1", split_kernel_keys()},
        {"b2", split_kernel_keys()},
        {"evolution", {"family", "base", "amplitude", "frequency", "M", "delta", "stability_window", "stability_max_lag"}},
        {"resolvent", {"A", "memory_coeff", "memory_rate", "step", "richardson", "tol", "M", "gamma", "q"}},
        {"nonlocal", {"times", "weights", "offset"}},
        {"causal", {"coeff", "rate"}},
        {"initial", {"u0"}},
        {"plan", {"radius", "state_samples"}},
        {"certify", {"theorem", "rho"}},
        {"solve", {"tol", "max_iterations", "allow_uncertified"}},
        {"diagnose", {"test", "domain", "shifts", "shift_period", "shift_count", "probe_min", "probe_max",
                      "probe_count", "tol", "eps", "windows", "split_time"}},
        {"heat", {"n", "alpha0", "alpha_rate", "alpha_kappa", "beta0", "beta_rate", "beta_kappa", "p", "gamma",
                  "a_forcing", "a_amplitude", "a_frequency", "a_decay", "b0", "b1", "h_times", "h_weights", "rho",
                  "t_max", "step", "resolvent_step", "resolvent_tol"}},
        {"delay", {"kappa", "tau", "t_min", "t_max", "step", "tol", "quad_tol", "theorem"}},
        {"output", {"dir"}},
    };
    return s;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

class Section {
public:
    Section(std::string name, const pt::ptree* tree) : name_(std::move(name)), tree_(tree) {}

    [[nodiscard]] bool present() const { return tree_ != nullptr; }
    [[nodiscard]] bool has(const std::string& key) const { return tree_ && tree_->find(key) != tree_->not_found(); }
    [[nodiscard]] std::string str(const std::string& key, const std::string& fallback) const {
        return has(key) ? trim(tree_->get<std::string>(key)) : fallback;
    }
    [[nodiscard]] double num(const std::string& key, double fallback) const {
        if (!has(key)) return fallback;
        try {
            return parse_number(str(key, ""));
        } catch (const Error& e) {
            throw ConfigError("[" + name_ + "] " + key + ": " + e.what());
        }
    }
    [[nodiscard]] double positive(const std::string& key, double fallback) const {
        const double v = num(key, fallback);
        if (!(v > 0.0)) throw ConfigError("[" + name_ + "] " + key + " must be positive");
        return v;
    }
    [[nodiscard]] int integer(const std::string& key, int fallback) const {
        const double v = num(key, fallback);
        if (v != std::floor(v)) throw ConfigError("[" + name_ + "] " + key + " must be an integer");
        return static_cast<int>(v);
    }
    [[nodiscard]] bool flag(const std::string& key, bool fallback) const {
        if (!has(key)) return fallback;
        const std::string v = str(key, "");
        if (v == "true" || v == "yes" || v == "1") return true;
        if (v == "false" || v == "no" || v == "0") return false;
        throw ConfigError("[" + name_ + "] " + key + ": expected true/false");
    }
    [[nodiscard]] std::vector<double> list(const std::string& key) const {
        if (!has(key)) return {};
        try {
            return parse_list(str(key, ""));
        } catch (const Error& e) {
            throw ConfigError("[" + name_ + "] " + key + ": " + e.what());
        }
    }

private:
    std::string name_;
    const pt::ptree* tree_;
};

Section section(const pt::ptree& root, const std::string& name) {
    const auto it = root.find(name);
    return {name, it == root.not_found() ? nullptr : &it->second};
}

Forcing read_forcing(const Section& s, const std::string& prefix = "") {
    Forcing f;
    f.kind = forcing_kind_from_string(s.str(prefix.empty() ? "forcing" : prefix + "_forcing", "zero"));
    f.amplitude = s.num(prefix.empty() ? "amplitude" : prefix + "_amplitude", 1.0);
    f.frequency = s.num(prefix.empty() ? "frequency" : prefix + "_frequency", 1.0);
    f.decay = s.num(prefix.empty() ? "decay" : prefix + "_decay", 1.0);
    if (prefix.empty()) {
        f.phase = s.num("phase", 0.0);
        f.component = s.integer("component", -1);
    }
    return f;
}

KernelParams read_kernel(const Section& s, int dim, Orientation fallback) {
    KernelParams k;
    k.dim = dim;
    k.family = s.str("family", "exp_decay");
    k.orientation = orientation_from_string(s.str("orientation", to_string(fallback)));
    k.coeff = s.num("coeff", 0.0);
    k.rate = s.positive("rate", 1.0);
    k.wx = s.num("wx", 1.0);
    k.wy = s.num("wy", 0.0);
    k.map = state_map_from_string(s.str("map", "linear"));
    k.bias = s.num("bias", 0.0);
    k.amp = s.num("amp", 0.0);
    k.freq = s.num("freq", 1.0);
    k.radius = s.positive("radius", 1.0);
    return k;
}

SplitKernelParams read_split_kernel(const Section& s, int dim, Orientation fallback) {
    SplitKernelParams k;
    k.aa = read_kernel(s, dim, fallback);
    k.ergodic_coeff = s.num("ergodic_coeff", 0.0);
    k.ergodic_decay = s.positive("ergodic_decay", 1.0);
    k.ergodic_bias = s.num("ergodic_bias", 0.0);
    return k;
}

TimeWarp read_warp(const std::string& text) {
    if (text.empty() || text == "identity") return TimeWarp::identity();
    if (text.rfind("shift:", 0) == 0) return TimeWarp::shift(parse_number(text.substr(6)));
    throw ConfigError("warp '" + text + "': expected identity or shift:<tau>");
}

Mat parse_matrix(const std::string& text, int dim) {
    std::vector<std::vector<double>> rows;
    std::stringstream in(text);
    std::string row;
    while (std::getline(in, row, ';')) rows.push_back(parse_list(row));
    if (static_cast<int>(rows.size()) != dim) throw ConfigError("matrix needs " + std::to_string(dim) + " rows");
    Mat m(dim, dim);
    for (int i = 0; i < dim; ++i) {
        if (static_cast<int>(rows[i].size()) != dim) throw ConfigError("matrix row " + std::to_string(i + 1) + " has the wrong length");
        for (int j = 0; j < dim; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

Vec to_vec(const std::vector<double>& v, int dim, const std::string& what) {
    if (v.empty()) return {};
    if (static_cast<int>(v.size()) == 1) return Vec::Constant(dim, v[0]);
    if (static_cast<int>(v.size()) != dim) throw ConfigError(what + " needs 1 or " + std::to_string(dim) + " entries");
    return Eigen::Map<const Vec>(v.data(), dim);
}

ProblemSpec read_problem(const pt::ptree& root) {
    const Section p = section(root, "problem");
    ProblemSpec s;
    s.name = p.str("name", "problem");
    s.variant = variant_from_string(p.str("variant", "advanced_delayed"));
    s.dim = p.integer("dim", 1);
    if (s.dim < 1) throw ConfigError("[problem] dim must be positive");
    s.t_min = p.num("t_min", s.t_min);
    s.t_max = p.num("t_max", s.t_max);
    s.step = p.positive("step", s.step);
    s.quad_tol = p.positive("quad_tol", s.quad_tol);
    s.constants_tol = p.positive("constants_tol", s.constants_tol);
    s.slack = p.positive("slack", s.slack);
    if (p.has("sup_points")) {
        const int n = p.integer("sup_points", 401);
        if (n < 2) throw ConfigError("[problem] sup_points must be at least 2");
        const double lo = s.domain() == DomainKind::half_line ? 0.0 : s.t_min;
        s.sup_grid = linspace(lo, s.t_max, static_cast<std::size_t>(n));
    }
    s.delay_tau = p.num("delay_tau", 0.0);
    s.warps_declared_aa = p.flag("warps_declared_aa", false);
    s.a0 = read_warp(p.str("a0", "identity"));
    s.a1 = read_warp(p.str("a1", "identity"));
    s.a2 = read_warp(p.str("a2", "identity"));

    const Section f = section(root, "f");
    NonlinearityParams np;
    np.family = f.str("family", "linear");
    np.dim = s.dim;
    np.forcing = read_forcing(f);
    np.a = f.num("a", 0.0);
    np.b = f.num("b", 0.0);
    if (f.has("curve")) {
        const auto c = f.list("curve");
        if (c.size() != 3) throw ConfigError("[f] curve needs l0,l1,l2");
        np.declared_curve = std::array<double, 3>{c[0], c[1], c[2]};
    }
    s.f = make_nonlinearity(np);

    const bool half = s.variant == Variant::half_line;
    if (const Section c1 = section(root, "c1"); c1.present()) s.c1 = make_kernel(read_kernel(c1, s.dim, Orientation::delayed));
    if (const Section c2 = section(root, "c2"); c2.present()) s.c2 = make_kernel(read_kernel(c2, s.dim, Orientation::advanced));
    if (const Section b1 = section(root, "b1"); b1.present())
        s.b1 = make_split_kernel(read_split_kernel(b1, s.dim, half ? Orientation::half_line_delayed : Orientation::delayed));
    if (const Section b2 = section(root, "b2"); b2.present())
        s.b2 = make_split_kernel(read_split_kernel(b2, s.dim, Orientation::advanced));

    if (const Section e = section(root, "evolution"); e.present()) {
        const std::string fam = e.str("family", "constant");
        const double base = e.num("base", 1.0), amp = e.num("amplitude", 0.0), freq = e.num("frequency", 1.0);
        if (fam == "constant")
            s.family = std::make_shared<const EvolutionFamily>(
                EvolutionFamily::constant(-base * Mat::Identity(s.dim, s.dim), "constant"));
        else if (fam == "sinusoid")
            s.family = std::make_shared<const EvolutionFamily>(EvolutionFamily::scalar_sinusoid(s.dim, base, amp, freq));
        else if (fam == "psi")
            s.family = std::make_shared<const EvolutionFamily>(EvolutionFamily::scalar_psi(s.dim, base, amp));
        else
            throw ConfigError("[evolution] unknown family '" + fam + "'");
        std::optional<std::pair<double, double>> declared;
        if (e.has("M") != e.has("delta")) throw ConfigError("[evolution] declare both M and delta or neither");
        if (e.has("M")) declared = std::pair{e.positive("M", 1.0), e.positive("delta", 1.0)};
        s.stability = certify_stability(
            *s.family,
            StabilityPlan::standard(e.positive("stability_window", 20.0), e.positive("stability_max_lag", 10.0)),
            declared);
    }
    if (const Section r = section(root, "resolvent"); r.present()) {
        if (!r.has("A")) throw ConfigError("[resolvent] A is required");
        const Mat A = parse_matrix(r.str("A", ""), s.dim);
        const double c = r.num("memory_coeff", 0.0), rate = r.positive("memory_rate", 1.0);
        const int d = s.dim;
        ResolventOptions ro;
        ro.t_max = s.t_max;
        ro.step = r.positive("step", 0.01);
        ro.richardson = r.flag("richardson", true);
        ro.tol = r.positive("tol", 1e-6);
        ResolventOperator R = build_resolvent(
            A, [c, rate, d](double t) { return Mat(c * std::exp(-rate * t) * Mat::Identity(d, d)); }, ro);
        if (r.has("M") != r.has("gamma")) throw ConfigError("[resolvent] declare both M and gamma or neither");
        if (r.has("M")) {
            R.decay = ResolventDecay{r.positive("M", 1.0), r.positive("gamma", 1.0), r.positive("q", 1.0)};
            const DecayTable tab = decay_table(R, *R.decay, uniform_grid(0.0, s.t_max, 0.25));
            if (!tab.holds)
                throw ConfigError("[resolvent] declared decay bound fails (worst slack " + format_double(tab.worst_slack) + ")");
        }
        s.resolvent = std::make_shared<const ResolventOperator>(std::move(R));
    }
    if (const Section n = section(root, "nonlocal"); n.present()) {
        s.g.times = n.list("times");
        s.g.weights = n.list("weights");
        if (s.g.times.size() != s.g.weights.size()) throw ConfigError("[nonlocal] times and weights differ in length");
        s.g.offset = to_vec(n.list("offset"), s.dim, "[nonlocal] offset");
    }
    if (const Section c = section(root, "causal"); c.present())
        s.causal = CausalOperator::exponential(s.dim, c.num("coeff", 0.0), c.positive("rate", 1.0));
    if (const Section i = section(root, "initial"); i.present()) s.u0 = to_vec(i.list("u0"), s.dim, "[initial] u0");
    if (const Section pl = section(root, "plan"); pl.present()) {
        s.plan.radius = pl.positive("radius", s.plan.radius);
        s.plan.state_samples = pl.integer("state_samples", s.plan.state_samples);
    }
    s.validate();
    return s;
}

}  // namespace

double parse_number(const std::string& raw) {
    const std::string text = trim(raw);
    if (text.size() >= 2 && text.compare(text.size() - 2, 2, "pi") == 0) {
        const std::string head = text.substr(0, text.size() - 2);
        const double c = head.empty() ? 1.0 : head == "-" ? -1.0 : parse_double(head);
        return c * std::numbers::pi;
    }
    return parse_double(text);
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        if (trim(tok).empty()) throw Error("empty list entry");
        out.push_back(parse_number(tok));
    }
    return out;
}

std::vector<double> DiagnoseSettings::probes() const {
    if (probe_count < 1) throw ConfigError("[diagnose] probe_count must be positive");
    if (probe_count == 1) return {probe_min};
    return linspace(probe_min, probe_max, static_cast<std::size_t>(probe_count));
}

std::vector<double> DiagnoseSettings::shift_list(double t_max) const {
    if (!shifts.empty()) return shifts;
    std::vector<double> out;
    for (int n = 1; n <= shift_count && probe_max + shift_period * n <= t_max; ++n) out.push_back(shift_period * n);
    return out;
}

RunConfig parse_config(const std::string& text) {
    pt::ptree root;
    try {
        std::istringstream in(text);
        pt::read_ini(in, root);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    for (const auto& [name, sec] : root) {
        const auto it = schema().find(name);
        if (it == schema().end()) {
            if (sec.empty()) throw ConfigError("config: key '" + name + "' outside a section");
            throw ConfigError("config: unknown section [" + name + "]");
        }
        for (const auto& [key, value] : sec)
            if (!it->second.count(key)) throw ConfigError("config: unknown key '" + key + "' in [" + name + "]");
    }

    RunConfig cfg;
    if (section(root, "problem").present()) cfg.spec = read_problem(root);

    const Section c = section(root, "certify");
    if (c.has("theorem")) cfg.certify.theorem = theorem_from_string(c.str("theorem", ""));
    cfg.certify.rho = c.num("rho", 0.0);

    const Section so = section(root, "solve");
    cfg.solve.tol = so.positive("tol", cfg.solve.tol);
    cfg.solve.max_iterations = so.integer("max_iterations", cfg.solve.max_iterations);
    if (cfg.solve.max_iterations < 1) throw ConfigError("[solve] max_iterations must be positive");
    cfg.solve.allow_uncertified = so.flag("allow_uncertified", false);

    const Section d = section(root, "diagnose");
    DiagnoseSettings& ds = cfg.diagnose;
    ds.test = d.str("test", ds.test);
    if (ds.test != "bochner" && ds.test != "range" && ds.test != "aaa" && ds.test != "bohr_neugebauer" && ds.test != "all")
        throw ConfigError("[diagnose] unknown test '" + ds.test + "'");
    const std::string dom = d.str("domain", cfg.spec ? (cfg.spec->domain() == DomainKind::half_line ? "half_line" : "full_line")
                                                     : "full_line");
    if (dom == "half_line") ds.domain = DomainKind::half_line;
    else if (dom != "full_line") throw ConfigError("[diagnose] domain must be full_line or half_line");
    ds.shifts = d.list("shifts");
    ds.shift_period = d.positive("shift_period", ds.shift_period);
    ds.shift_count = d.integer("shift_count", ds.shift_count);
    ds.probe_min = d.num("probe_min", ds.probe_min);
    ds.probe_max = d.num("probe_max", ds.probe_max);
    ds.probe_count = d.integer("probe_count", ds.probe_count);
    if (ds.probe_max < ds.probe_min) throw ConfigError("[diagnose] probe_max below probe_min");
    ds.tol = d.positive("tol", ds.tol);
    ds.eps = d.positive("eps", ds.eps);
    if (d.has("windows")) ds.windows = d.list("windows");
    ds.split_time = d.num("split_time", ds.split_time);

    const Section h = section(root, "heat");
    HeatDemoParams& hp = cfg.heat;
    hp.n = h.integer("n", hp.n);
    hp.alpha = {h.positive("alpha0", hp.alpha.value0), h.positive("alpha_rate", hp.alpha.rate), h.num("alpha_kappa", hp.alpha.kappa)};
    hp.beta = {h.positive("beta0", hp.beta.value0), h.positive("beta_rate", hp.beta.rate), h.num("beta_kappa", hp.beta.kappa)};
    hp.p = h.num("p", hp.p);
    hp.gamma = h.num("gamma", hp.gamma);
    if (h.has("a_forcing")) hp.a = read_forcing(h, "a");
    hp.b0 = h.num("b0", hp.b0);
    hp.b1 = h.num("b1", hp.b1);
    hp.h.times = h.list("h_times");
    hp.h.weights = h.list("h_weights");
    if (hp.h.times.size() != hp.h.weights.size()) throw ConfigError("[heat] h_times and h_weights differ in length");
    hp.rho = h.num("rho", hp.rho);
    hp.t_max = h.positive("t_max", hp.t_max);
    hp.step = h.positive("step", hp.step);
    hp.resolvent.step = h.positive("resolvent_step", hp.resolvent.step);
    hp.resolvent.tol = h.positive("resolvent_tol", hp.resolvent.tol);

    const Section dl = section(root, "delay");
    DelayDemoParams& dp = cfg.delay;
    dp.kappa = dl.num("kappa", dp.kappa);
    dp.tau = dl.num("tau", dp.tau);
    dp.t_min = dl.num("t_min", dp.t_min);
    dp.t_max = dl.num("t_max", dp.t_max);
    dp.step = dl.positive("step", dp.step);
    dp.tol = dl.positive("tol", dp.tol);
    dp.quad_tol = dl.positive("quad_tol", dp.quad_tol);
    if (dl.has("theorem")) dp.theorem = theorem_from_string(dl.str("theorem", ""));

    cfg.out_dir = section(root, "output").str("dir", "");
    return cfg;
}

RunConfig load_config(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open config '" + file + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace aafix::cli
