#include "ucpd/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "ucpd/error.hpp"

namespace ucpd {

using nlohmann::json;

namespace {

[[noreturn]] void field_error(const std::string& path, const std::string& message) {
    throw ConfigError(path + ": " + message);
}

const json& require(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) field_error(path, "expected an object");
    const auto it = j.find(key);
    if (it == j.end()) field_error(path + "." + key, "missing required field");
    return *it;
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) field_error(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) field_error(path, "expected a finite number");
    return v;
}

std::uint64_t as_unsigned(const json& j, const std::string& path) {
    if (!j.is_number_integer() || (!j.is_number_unsigned() && j.get<std::int64_t>() < 0)) {
        field_error(path, "expected a non-negative integer");
    }
    return j.get<std::uint64_t>();
}

std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) field_error(path, "expected a string");
    return j.get<std::string>();
}

template <class T>
json optional_json(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> optional_from(const json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    return it->get<T>();
}

const char* window_name(LrvWindow w) { return w == LrvWindow::bartlett ? "bartlett" : "truncated"; }

}  // namespace

json to_json(const TestConfig& config) {
    json j;
    j["kernel"] = config.kernel.name();
    j["gamma"] = config.gamma;
    j["alpha"] = config.alpha;
    if (const auto* known = std::get_if<KnownSigma>(&config.sigma)) {
        j["sigma"] = known->sigma;
    } else {
        const auto& est = std::get<EstimateSigma>(config.sigma);
        j["sigma"] = "estimate";
        j["bandwidth"] = optional_json(est.bandwidth);
        j["window"] = window_name(est.window);
    }
    return j;
}

TestConfig test_config_from_json(const json& j, const std::string& path) {
    if (!j.is_object()) field_error(path, "expected an object");
    TestConfig c;
    if (j.contains("kernel")) {
        const std::string id = as_string(j["kernel"], path + ".kernel");
        try {
            c.kernel = Kernel::from_string(id);
        } catch (const Error& e) {
            field_error(path + ".kernel", e.what());
        }
    }
    if (j.contains("gamma")) {
        c.gamma = as_number(j["gamma"], path + ".gamma");
        if (!(c.gamma >= 0.0 && c.gamma <= 0.5)) field_error(path + ".gamma", "must lie in [0, 0.5]");
    }
    if (j.contains("alpha")) {
        c.alpha = as_number(j["alpha"], path + ".alpha");
        if (!(c.alpha > 0.0 && c.alpha < 1.0)) field_error(path + ".alpha", "must lie in (0, 1)");
    }
    if (j.contains("sigma")) {
        const json& s = j["sigma"];
        if (s.is_string()) {
            if (s.get<std::string>() != "estimate") {
                field_error(path + ".sigma", "expected a positive number or \"estimate\"");
            }
        } else {
            const double sigma = as_number(s, path + ".sigma");
            if (!(sigma > 0.0)) field_error(path + ".sigma", "must be positive");
            c.sigma = KnownSigma{sigma};
        }
    }
    if (auto* est = std::get_if<EstimateSigma>(&c.sigma)) {
        if (j.contains("bandwidth") && !j["bandwidth"].is_null()) {
            est->bandwidth = as_unsigned(j["bandwidth"], path + ".bandwidth");
        }
        if (j.contains("window")) {
            const std::string w = as_string(j["window"], path + ".window");
            if (w == "bartlett") {
                est->window = LrvWindow::bartlett;
            } else if (w == "truncated") {
                est->window = LrvWindow::truncated;
            } else {
                field_error(path + ".window", "expected \"bartlett\" or \"truncated\"");
            }
        }
    }
    return c;
}

json to_json(const GeneratorSpec& spec) {
    json j;
    switch (spec.kind) {
    case GeneratorKind::iid_normal:
        j["kind"] = "iid_normal";
        break;
    case GeneratorKind::iid_t:
        j["kind"] = "iid_t";
        j["df"] = spec.df;
        break;
    case GeneratorKind::ar1:
        j["kind"] = "ar1";
        j["phi"] = spec.phi;
        j["innovation"] = spec.innovation == Innovation::normal ? "normal" : "t";
        if (spec.innovation == Innovation::t) j["df"] = spec.df;
        break;
    }
    return j;
}

GeneratorSpec generator_from_json(const json& j, const std::string& path) {
    if (j.is_string()) return generator_from_json(json{{"kind", j}}, path);
    const std::string kind = as_string(require(j, "kind", path), path + ".kind");
    auto read_df = [&](GeneratorSpec& g) {
        if (j.contains("df")) {
            const json& df = j["df"];
            if (!df.is_number_integer()) field_error(path + ".df", "expected an integer");
            g.df = df.get<int>();
            if (g.df <= 2) field_error(path + ".df", "must be > 2 so the variance exists");
        }
    };
    GeneratorSpec g;
    if (kind == "iid_normal") {
        g.kind = GeneratorKind::iid_normal;
    } else if (kind == "iid_t") {
        g.kind = GeneratorKind::iid_t;
        read_df(g);
    } else if (kind == "ar1") {
        g.kind = GeneratorKind::ar1;
        g.phi = as_number(require(j, "phi", path), path + ".phi");
        if (!(std::abs(g.phi) < 1.0)) field_error(path + ".phi", "must satisfy |phi| < 1");
        if (j.contains("innovation")) {
            const std::string inn = as_string(j["innovation"], path + ".innovation");
            if (inn == "normal") {
                g.innovation = Innovation::normal;
            } else if (inn == "t") {
                g.innovation = Innovation::t;
            } else {
                field_error(path + ".innovation", "expected \"normal\" or \"t\"");
            }
        }
        read_df(g);
    } else {
        field_error(path + ".kind", "expected iid_normal, iid_t or ar1, got \"" + kind + "\"");
    }
    return g;
}

json to_json(const McConfig& config) {
    json j;
    j["n"] = config.n;
    j["runs"] = config.runs;
    j["seed"] = config.seed;
    j["generator"] = to_json(config.generator);
    if (config.change) {
        j["change"] = {{"k_star", config.change->k_star}, {"delta", config.change->delta}};
    } else {
        j["change"] = nullptr;
    }
    j["test"] = to_json(config.test);
    return j;
}

McConfig mc_config_from_json(const json& j) {
    if (!j.is_object()) field_error("config", "expected an object");
    McConfig c;
    c.n = as_unsigned(require(j, "n", "config"), "n");
    c.runs = as_unsigned(require(j, "runs", "config"), "runs");
    if (c.runs < 1) field_error("runs", "must be >= 1");
    if (c.n < kMinTestN) field_error("n", "must be >= " + std::to_string(kMinTestN));
    if (j.contains("seed")) c.seed = as_unsigned(j["seed"], "seed");
    if (j.contains("generator")) c.generator = generator_from_json(j["generator"], "generator");
    if (j.contains("change") && !j["change"].is_null()) {
        const json& ch = j["change"];
        ChangeSpec spec;
        spec.delta = as_number(require(ch, "delta", "change"), "change.delta");
        if (ch.contains("k_star")) spec.k_star = as_unsigned(ch["k_star"], "change.k_star");
        c.change = spec;
    }
    if (j.contains("test")) c.test = test_config_from_json(j["test"], "test");
    return c;
}

json to_json(const TestOutcome& o) {
    json j;
    j["schema_version"] = kReportSchemaVersion;
    j["n"] = o.n;
    j["kernel"] = o.kernel.name();
    j["gamma"] = o.gamma;
    j["alpha"] = o.alpha;
    j["raw_max"] = o.raw_max;
    j["normalized_stat"] = optional_json(o.normalized_stat);
    j["k_hat"] = o.k_hat;
    j["sigma_used"] = o.sigma_used;
    j["sigma_floored"] = o.sigma_floored;
    j["p_value"] = optional_json(o.p_value);
    j["critical_value"] = optional_json(o.critical_value);
    j["reject"] = optional_json(o.reject);
    j["warnings"] = o.warnings;
    return j;
}

TestOutcome outcome_from_json(const json& j) {
    TestOutcome o;
    o.n = j.at("n").get<std::size_t>();
    o.kernel = Kernel::from_string(j.at("kernel").get<std::string>());
    o.gamma = j.at("gamma").get<double>();
    o.alpha = j.at("alpha").get<double>();
    o.raw_max = j.at("raw_max").get<double>();
    o.normalized_stat = optional_from<double>(j, "normalized_stat");
    o.k_hat = j.at("k_hat").get<std::size_t>();
    o.sigma_used = j.at("sigma_used").get<double>();
    o.sigma_floored = j.value("sigma_floored", false);
    o.p_value = optional_from<double>(j, "p_value");
    o.critical_value = optional_from<double>(j, "critical_value");
    o.reject = optional_from<bool>(j, "reject");
    o.warnings = j.at("warnings").get<std::vector<std::string>>();
    return o;
}

json to_json(const McReport& r) {
    json cells = json::array();
    for (const McCell& c : r.cells) {
        cells.push_back({
            {"quantity", c.quantity},
            {"statistic", c.statistic},
            {"n", c.n},
            {"runs", c.runs},
            {"alpha", optional_json(c.alpha)},
            {"tau", optional_json(c.tau)},
            {"prob", optional_json(c.prob)},
            {"estimate", c.estimate},
            {"std_error", optional_json(c.std_error)},
            {"reference", optional_json(c.reference)},
        });
    }
    return {
        {"schema_version", r.schema_version},
        {"experiment", r.experiment},
        {"config", r.config},
        {"rng", r.rng},
        {"cells", cells},
        {"elapsed_seconds", r.elapsed_seconds},
    };
}

McReport report_from_json(const json& j) {
    McReport r;
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != kReportSchemaVersion) {
        throw ConfigError("unsupported report schema_version " + std::to_string(r.schema_version));
    }
    r.experiment = j.at("experiment").get<std::string>();
    r.config = j.at("config");
    r.rng = j.at("rng").get<std::string>();
    r.elapsed_seconds = j.at("elapsed_seconds").get<double>();
    for (const json& c : j.at("cells")) {
        McCell cell;
        cell.quantity = c.at("quantity").get<std::string>();
        cell.statistic = c.at("statistic").get<std::string>();
        cell.n = c.at("n").get<std::size_t>();
        cell.runs = c.at("runs").get<std::size_t>();
        cell.alpha = optional_from<double>(c, "alpha");
        cell.tau = optional_from<double>(c, "tau");
        cell.prob = optional_from<double>(c, "prob");
        cell.estimate = c.at("estimate").get<double>();
        cell.std_error = optional_from<double>(c, "std_error");
        cell.reference = optional_from<double>(c, "reference");
        r.cells.push_back(std::move(cell));
    }
    return r;
}

namespace {

std::string fmt_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string fmt_optional(const std::optional<double>& v) { return v ? fmt_number(*v) : ""; }

}  // namespace

void write_csv(std::ostream& os, const McReport& report, bool header) {
    if (header) os << kCsvHeader << '\n';
    for (const McCell& c : report.cells) {
        os << report.experiment << ',' << c.statistic << ',' << c.quantity << ',' << c.n << ','
           << c.runs << ',' << fmt_optional(c.alpha) << ',' << fmt_optional(c.tau) << ','
           << fmt_optional(c.prob) << ',' << fmt_number(c.estimate) << ','
           << fmt_optional(c.std_error) << ',' << fmt_optional(c.reference) << '\n';
    }
}

std::string to_text(const TestOutcome& o) {
    std::ostringstream os;
    os.precision(6);
    os << "n               " << o.n << '\n'
       << "kernel          " << o.kernel.name() << '\n'
       << "gamma           " << o.gamma << '\n'
       << "raw_max         " << o.raw_max << '\n'
       << "k_hat           " << o.k_hat << '\n'
       << "sigma_used      " << o.sigma_used << (o.sigma_floored ? " (floored)" : "") << '\n';
    if (o.normalized_stat) {
        os << "normalized_stat " << *o.normalized_stat << '\n'
           << "critical_value  " << *o.critical_value << "  (alpha=" << o.alpha << ")\n"
           << "p_value         " << *o.p_value << '\n'
           << "reject          " << (*o.reject ? "yes" : "no") << '\n';
    }
    for (const std::string& w : o.warnings) os << "warning: " << w << '\n';
    return os.str();
}

}  // namespace ucpd
