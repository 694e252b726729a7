#include "dlab/scenario.hpp"

#include <atomic>
#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include "dlab/coherent.hpp"
#include "dlab/csv.hpp"
#include "dlab/errors.hpp"
#include "json.hpp"

namespace dlab::scenario {

using nlohmann::json;
using verify::StateField;

classical::ValidatedModel Scenario::model() const {
    return classical::validate(oscillator, ermakov);
}

modes::HermiteGaussBasis Scenario::basis() const {
    return modes::HermiteGaussBasis(model(), trajectory);
}

dlab::darboux::DarbouxTransform Scenario::transform() const {
    if (!darboux)
        throw ConfigError("scenario '" + name + "' has no darboux section");
    return dlab::darboux::DarbouxTransform(basis(), *darboux);
}

std::vector<double> Scenario::slices() const {
    if (!time_range) return times;
    const auto& r = *time_range;
    std::vector<double> out(std::size_t(r.n_slices));
    const double dt =
        r.n_slices > 1 ? (r.t_stop - r.t_start) / double(r.n_slices - 1) : 0.0;
    for (int i = 0; i < r.n_slices; ++i)
        out[std::size_t(i)] = r.t_start + double(i) * dt;
    return out;
}

namespace {

void check_keys(const json& j, const std::string& ctx,
                std::initializer_list<const char*> allowed) {
    if (!j.is_object())
        throw ConfigError("config: '" + ctx + "' must be an object");
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* k : allowed)
            if (item.key() == k) {
                known = true;
                break;
            }
        if (!known)
            throw ConfigError("config: unknown key '" + item.key() + "' in " +
                              ctx);
    }
}

double num_or(const json& j, const char* key, double def) {
    if (!j.contains(key)) return def;
    if (!j[key].is_number())
        throw ConfigError(std::string("config: '") + key + "' must be a number");
    return j[key].get<double>();
}

int int_or(const json& j, const char* key, int def) {
    if (!j.contains(key)) return def;
    if (!j[key].is_number_integer())
        throw ConfigError(std::string("config: '") + key +
                          "' must be an integer");
    return j[key].get<int>();
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: JSON parse error: ") + e.what());
    }
    check_keys(j, "root",
               {"name", "oscillator", "ermakov", "trajectory", "darboux", "grid",
                "times", "time_range", "n_list", "z_list", "family",
                "output_dir"});
    Scenario sc;
    if (j.contains("name")) {
        if (!j["name"].is_string())
            throw ConfigError("config: 'name' must be a string");
        sc.name = j["name"].get<std::string>();
    }
    if (j.contains("oscillator")) {
        const auto& o = j["oscillator"];
        check_keys(o, "oscillator", {"mass", "omega0", "hbar", "t0"});
        sc.oscillator.mass = num_or(o, "mass", sc.oscillator.mass);
        sc.oscillator.omega0 = num_or(o, "omega0", sc.oscillator.omega0);
        sc.oscillator.hbar = num_or(o, "hbar", sc.oscillator.hbar);
        sc.oscillator.t0 = num_or(o, "t0", sc.oscillator.t0);
    }
    sc.ermakov.lambda = classical::default_lambda(sc.oscillator);
    if (j.contains("ermakov")) {
        const auto& e = j["ermakov"];
        check_keys(e, "ermakov", {"a", "c", "lambda"});
        sc.ermakov.a = num_or(e, "a", sc.ermakov.a);
        sc.ermakov.c = num_or(e, "c", sc.ermakov.c);
        sc.ermakov.lambda = num_or(e, "lambda", sc.ermakov.lambda);
    }
    if (j.contains("trajectory")) {
        const auto& t = j["trajectory"];
        check_keys(t, "trajectory", {"x0", "p0"});
        sc.trajectory.x0 = num_or(t, "x0", sc.trajectory.x0);
        sc.trajectory.p0 = num_or(t, "p0", sc.trajectory.p0);
    }
    if (j.contains("darboux")) {
        const auto& d = j["darboux"];
        check_keys(d, "darboux", {"epsilon", "k_a", "k_b"});
        dlab::darboux::DarbouxSpec spec;
        spec.epsilon = num_or(d, "epsilon", spec.epsilon);
        spec.k_a = num_or(d, "k_a", spec.k_a);
        spec.k_b = num_or(d, "k_b", spec.k_b);
        sc.darboux = spec;
    }
    if (j.contains("grid")) {
        const auto& g = j["grid"];
        check_keys(g, "grid", {"x_min", "x_max", "n_points"});
        const double lo = num_or(g, "x_min", sc.grid.x_min);
        const double hi = num_or(g, "x_max", sc.grid.x_max);
        const int n = int_or(g, "n_points", sc.grid.n_points);
        try {
            sc.grid = Grid1D(lo, hi, n);
        } catch (const Error& e) {
            throw ConfigError(std::string("config: invalid grid: ") + e.what());
        }
    }
    if (j.contains("times")) {
        if (!j["times"].is_array() || j["times"].empty())
            throw ConfigError("config: 'times' must be a nonempty array");
        sc.times.clear();
        for (const auto& v : j["times"]) {
            if (!v.is_number())
                throw ConfigError("config: 'times' entries must be numbers");
            sc.times.push_back(v.get<double>());
        }
    }
    if (j.contains("time_range")) {
        const auto& r = j["time_range"];
        check_keys(r, "time_range", {"t_start", "t_stop", "n_slices"});
        TimeRange tr;
        tr.t_start = num_or(r, "t_start", tr.t_start);
        tr.t_stop = num_or(r, "t_stop", tr.t_stop);
        tr.n_slices = int_or(r, "n_slices", tr.n_slices);
        if (!(tr.t_stop > tr.t_start) || tr.n_slices < 2)
            throw ConfigError("config: time_range needs t_stop > t_start and "
                              "n_slices >= 2");
        sc.time_range = tr;
    }
    if (j.contains("n_list")) {
        if (!j["n_list"].is_array())
            throw ConfigError("config: 'n_list' must be an array");
        sc.n_list.clear();
        for (const auto& v : j["n_list"]) {
            if (!v.is_number_integer())
                throw ConfigError("config: 'n_list' entries must be integers");
            sc.n_list.push_back(v.get<int>());
        }
    }
    if (j.contains("z_list")) {
        if (!j["z_list"].is_array())
            throw ConfigError("config: 'z_list' must be an array");
        sc.z_list.clear();
        for (const auto& v : j["z_list"]) {
            if (!v.is_array() || v.size() != 2 || !v[0].is_number() ||
                !v[1].is_number())
                throw ConfigError(
                    "config: 'z_list' entries must be [re, im] pairs");
            sc.z_list.emplace_back(v[0].get<double>(), v[1].get<double>());
        }
    }
    if (j.contains("family")) {
        if (!j["family"].is_string())
            throw ConfigError("config: 'family' must be a string");
        sc.family = j["family"].get<std::string>();
        if (sc.family != "phi" && sc.family != "psi" && sc.family != "psi_tilde")
            throw ConfigError("config: family must be phi, psi, or psi_tilde");
    }
    if (j.contains("output_dir")) {
        if (!j["output_dir"].is_string())
            throw ConfigError("config: 'output_dir' must be a string");
        sc.output_dir = j["output_dir"].get<std::string>();
    }
    if (sc.times.empty()) throw ConfigError("config: times must be nonempty");
    return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("config: cannot open " + path.string());
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_scenario(buf.str());
}

namespace {

Scenario preset_base(bool branch_a, const std::string& nm, double x0, double p0) {
    Scenario sc;
    sc.name = nm;
    sc.oscillator = classical::OscillatorParams{};  // m=1, omega0=0.5, hbar=1, t0=0
    sc.ermakov.a = 1.0;
    sc.ermakov.c = branch_a ? 4.0 : 5.0;
    sc.ermakov.lambda = classical::default_lambda(sc.oscillator);
    sc.trajectory = classical::TrajectorySpec{x0, p0};
    dlab::darboux::DarbouxSpec spec;
    if (branch_a) {
        spec.epsilon = -0.5;
        spec.k_a = 0.89;
        spec.k_b = 1.0;
    } else {
        spec.epsilon = -1.5;
        spec.k_a = 1.7;
        spec.k_b = 1.0;
    }
    sc.darboux = spec;
    sc.grid = Grid1D(-20.0, 20.0, 2001);
    sc.times = {0.2, 6.0};
    sc.time_range = TimeRange{0.0, 25.2, 64};
    return sc;
}

std::string traj_tag(double x0, double p0) {
    auto fmt = [](double v) {
        std::string s = csv::format_double(v);
        for (auto& ch : s)
            if (ch == '.' || ch == '-') ch = 'm';
        return s;
    };
    return "x" + fmt(x0) + "p" + fmt(p0);
}

std::vector<Scenario> make_bundle(const std::string& name, bool branch_a) {
    const double pts[3][2] = {{0.0, 0.0}, {3.0, 0.0}, {3.0, 1.0}};
    std::vector<Scenario> out;
    for (const auto& p : pts)
        out.push_back(preset_base(
            branch_a, name + "_" + traj_tag(p[0], p[1]), p[0], p[1]));
    return out;
}

}  // namespace

std::vector<std::string> preset_names() {
    return {"fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8"};
}

std::string preset_command(const std::string& name) {
    if (name == "fig1" || name == "fig2" || name == "fig5") return "potential";
    if (name == "fig3" || name == "fig6") return "states";
    if (name == "fig4" || name == "fig7" || name == "fig8") return "coherent";
    throw ConfigError("unknown preset '" + name + "'");
}

std::vector<Scenario> preset(const std::string& name) {
    const bool branch_a =
        name == "fig1" || name == "fig2" || name == "fig3" || name == "fig4";
    if (name != "fig1" && name != "fig2" && name != "fig3" && name != "fig4" &&
        name != "fig5" && name != "fig6" && name != "fig7" && name != "fig8")
        throw ConfigError("unknown preset '" + name + "'");
    auto bundle = make_bundle(name, branch_a);
    for (auto& sc : bundle) {
        if (name == "fig3" || name == "fig6") sc.n_list = {0, 1, 2};
        if (name == "fig4" || name == "fig7" || name == "fig8") {
            sc.z_list = {cplx{0.0, 1.0}, cplx{3.0, -3.0}};
            sc.family = (name == "fig7") ? "psi_tilde" : "psi";
        }
    }
    return bundle;
}

namespace {

std::atomic<int> g_threads{0};

/// Index-parallel loop with first-exception propagation.
void parallel_for(int n, const std::function<void(int)>& fn) {
    int nt = thread_count();
    nt = std::min(nt, n);
    if (nt <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first;
    std::mutex mu;
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(mu);
                if (!first) first = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(std::size_t(nt));
    for (int i = 0; i < nt; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first) std::rethrow_exception(first);
}

std::vector<std::string> scenario_metadata(const Scenario& sc) {
    using csv::format_double;
    std::vector<std::string> m;
    m.push_back("scenario: " + sc.name);
    m.push_back("oscillator: mass=" + format_double(sc.oscillator.mass) +
                " omega0=" + format_double(sc.oscillator.omega0) +
                " hbar=" + format_double(sc.oscillator.hbar) +
                " t0=" + format_double(sc.oscillator.t0));
    const auto model = sc.model();
    m.push_back("ermakov: a=" + format_double(sc.ermakov.a) +
                " c=" + format_double(sc.ermakov.c) +
                " lambda=" + format_double(sc.ermakov.lambda) +
                " b=" + format_double(model.b()));
    m.push_back("trajectory: x0=" + format_double(sc.trajectory.x0) +
                " p0=" + format_double(sc.trajectory.p0));
    if (sc.darboux)
        m.push_back("darboux: epsilon=" + format_double(sc.darboux->epsilon) +
                    " k_a=" + format_double(sc.darboux->k_a) +
                    " k_b=" + format_double(sc.darboux->k_b));
    m.push_back("grid: x_min=" + format_double(sc.grid.x_min) +
                " x_max=" + format_double(sc.grid.x_max) +
                " n_points=" + std::to_string(sc.grid.n_points));
    return m;
}

std::vector<std::string> map_header(const Grid1D& g) {
    std::vector<std::string> h;
    h.reserve(std::size_t(g.n_points) + 1);
    h.emplace_back("t");
    for (int i = 0; i < g.n_points; ++i)
        h.push_back("x=" + csv::format_double(g.x(i)));
    return h;
}

std::string sanitize(const std::string& s) {
    std::string out;
    for (char c : s)
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' ||
                c == '_')
                   ? c
                   : '_';
    return out;
}

}  // namespace

void set_thread_count(int n) { g_threads.store(n < 0 ? 0 : n); }

int thread_count() {
    const int n = g_threads.load();
    if (n > 0) return n;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : int(hw);
}

std::vector<std::filesystem::path> cmd_potential(
    const Scenario& sc, const std::filesystem::path& out_dir) {
    const auto model = sc.transform();  // certification happens here
    const auto meta = scenario_metadata(sc);
    std::vector<std::filesystem::path> written;

    // per-time curve files
    for (std::size_t k = 0; k < sc.times.size(); ++k) {
        const double t = sc.times[k];
        const auto v1 = model.sample_potential_v1(sc.grid, t);
        csv::Table tab;
        tab.metadata = meta;
        tab.metadata.push_back("command: potential, t=" + csv::format_double(t));
        tab.header = {"x", "V0", "V1", "V1_minus_V0"};
        tab.rows.reserve(std::size_t(sc.grid.n_points));
        for (int i = 0; i < sc.grid.n_points; ++i) {
            const double x = sc.grid.x(i);
            const double v0 = model.potential_v0(x);
            tab.rows.push_back({x, v0, v1[std::size_t(i)],
                                v1[std::size_t(i)] - v0});
        }
        const auto path =
            out_dir / (sanitize(sc.name) + "_potential_t" + std::to_string(k) +
                       ".csv");
        csv::write_csv(path, tab);
        written.push_back(path);
    }

    // space-time map
    const auto ts = sc.slices();
    std::vector<std::vector<double>> rows(ts.size());
    parallel_for(int(ts.size()), [&](int i) {
        const double t = ts[std::size_t(i)];
        const auto v1 = model.sample_potential_v1(sc.grid, t);
        auto& row = rows[std::size_t(i)];
        row.reserve(v1.size() + 1);
        row.push_back(t);
        row.insert(row.end(), v1.begin(), v1.end());
    });
    csv::Table map;
    map.metadata = meta;
    map.metadata.push_back("command: potential map, rows are time slices");
    map.header = map_header(sc.grid);
    map.rows = std::move(rows);
    const auto map_path =
        out_dir / (sanitize(sc.name) + "_potential_map.csv");
    csv::write_csv(map_path, map);
    written.push_back(map_path);
    return written;
}

std::vector<std::filesystem::path> cmd_states(
    const Scenario& sc, const std::vector<int>& n_list,
    const std::filesystem::path& out_dir) {
    const std::vector<int>& ns = n_list.empty() ? sc.n_list : n_list;
    if (ns.empty())
        throw ConfigError("cmd_states: no mode indices requested");
    int n_max = 0;
    for (int n : ns) {
        if (n < 0 || n > modes::kModeCap)
            throw ConfigError("cmd_states: mode index outside the cap");
        n_max = std::max(n_max, n);
    }
    const bool deformed = sc.darboux.has_value();
    const auto basis = sc.basis();
    std::optional<dlab::darboux::DarbouxTransform> model;
    if (deformed) model.emplace(basis, *sc.darboux);

    const auto ts = sc.slices();
    // density rows per requested n, filled slice-parallel
    std::vector<std::vector<std::vector<double>>> dens(
        ns.size(), std::vector<std::vector<double>>(ts.size()));
    parallel_for(int(ts.size()), [&](int i) {
        const double t = ts[std::size_t(i)];
        const auto fam = deformed ? model->sample_psi_family(n_max, sc.grid, t)
                                  : basis.sample_phi_family(n_max, sc.grid, t);
        for (std::size_t k = 0; k < ns.size(); ++k) {
            auto& row = dens[k][std::size_t(i)];
            row.reserve(std::size_t(sc.grid.n_points) + 1);
            row.push_back(t);
            const auto& f = fam[std::size_t(ns[k])];
            for (const auto& v : f.values) row.push_back(std::norm(v));
        }
    });

    const auto meta = scenario_metadata(sc);
    std::vector<std::filesystem::path> written;
    for (std::size_t k = 0; k < ns.size(); ++k) {
        csv::Table tab;
        tab.metadata = meta;
        tab.metadata.push_back(std::string("command: states, family=") +
                               (deformed ? "psi" : "phi") +
                               ", n=" + std::to_string(ns[k]) +
                               ", values are |state|^2");
        tab.header = map_header(sc.grid);
        tab.rows = std::move(dens[k]);
        const auto path = out_dir / (sanitize(sc.name) + "_" +
                                     (deformed ? "psi" : "phi") +
                                     std::to_string(ns[k]) + "_map.csv");
        csv::write_csv(path, tab);
        written.push_back(path);
    }
    return written;
}

std::vector<std::filesystem::path> cmd_coherent(
    const Scenario& sc, const std::vector<cplx>& z_list,
    const std::string& family, const std::filesystem::path& out_dir) {
    const std::vector<cplx>& zs = z_list.empty() ? sc.z_list : z_list;
    const std::string fam = family.empty() ? sc.family : family;
    if (zs.empty()) throw ConfigError("cmd_coherent: no z values requested");
    if (fam != "phi" && fam != "psi" && fam != "psi_tilde")
        throw ConfigError("cmd_coherent: family must be phi, psi, or psi_tilde");

    const auto basis = sc.basis();
    std::optional<dlab::darboux::DarbouxTransform> model;
    if (fam != "phi") {
        if (!sc.darboux)
            throw ConfigError("cmd_coherent: family '" + fam +
                              "' needs a darboux section");
        model.emplace(basis, *sc.darboux);
    }

    const auto ts = sc.slices();
    const auto meta = scenario_metadata(sc);
    std::vector<std::filesystem::path> written;

    for (std::size_t zk = 0; zk < zs.size(); ++zk) {
        const cplx z = zs[zk];
        std::optional<coherent::CoherentState> state;
        if (fam != "phi") state.emplace(*model, z);

        std::vector<std::vector<double>> rows(ts.size());
        parallel_for(int(ts.size()), [&](int i) {
            const double t = ts[std::size_t(i)];
            StateField f =
                fam == "phi"
                    ? coherent::sample_phi_z(basis, z, sc.grid, t)
                    : (fam == "psi" ? state->sample_psi_z(sc.grid, t)
                                    : state->psi_tilde_z(sc.grid, t));
            auto& row = rows[std::size_t(i)];
            row.reserve(f.values.size() + 1);
            row.push_back(t);
            for (const auto& v : f.values) row.push_back(std::norm(v));
        });

        csv::Table tab;
        tab.metadata = meta;
        tab.metadata.push_back("command: coherent, family=" + fam +
                               ", z=" + csv::format_double(z.real()) + "+" +
                               csv::format_double(z.imag()) +
                               "i, values are |state|^2");
        tab.header = map_header(sc.grid);
        tab.rows = std::move(rows);
        const auto path = out_dir / (sanitize(sc.name) + "_" + fam + "_z" +
                                     std::to_string(zk) + "_map.csv");
        csv::write_csv(path, tab);
        written.push_back(path);
    }
    return written;
}

}  // namespace dlab::scenario
