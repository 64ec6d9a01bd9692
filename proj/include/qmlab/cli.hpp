// cli.hpp
// Command-line front end. Five subcommands drive the library:
//
//   machine   single-machine statistics vs the trace rule
//   singlet   rigid-rod joint statistics vs the singlet-state oracle
//   chsh      four-setting Bell-test combination
//   paradox   equal reduced states, different joint states
//   dynamics  mixture lift vs pure lift under (non)unitary evolution
//
// Exit codes: 0 success, 2 usage error, 3 numerical invariant violation.
// Reports are deterministic for a fixed command line; the timestamp field is
// suppressed under --reproducible.

#pragma once

#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qmlab/bloch.hpp"
#include "qmlab/distribution.hpp"
#include "qmlab/dynamics.hpp"
#include "qmlab/epr.hpp"
#include "qmlab/hilbert.hpp"
#include "qmlab/machine.hpp"
#include "qmlab/report.hpp"

namespace qmlab::cli {

inline constexpr int kOk = 0;
inline constexpr int kUsageError = 2;
inline constexpr int kNumericalViolation = 3;

inline constexpr double kOracleGateTol = 1e-12;

// Gate helper: 0 when the measured gap is within tolerance, 3 otherwise.
inline int gate_exit_code(double gap, double tol = kOracleGateTol) {
    return gap > tol ? kNumericalViolation : kOk;
}

namespace detail {

struct Options {
    // common
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    unsigned shards = 1;
    std::string format = "json";
    std::string output;
    bool reproducible = false;
    bool deg = false;

    // machine
    double theta = 0.0, phi = 0.0, weight_a = 1.0;
    double x = 0.0, y = 0.0, z = 0.0;
    bool center = false;
    double u_theta = 0.0, u_phi = 0.0;

    // singlet
    double alpha = 0.0;
    double u1_theta = 0.0, u1_phi = 0.0, u2_theta = 0.0, u2_phi = 0.0;
    unsigned sweep = 0;

    // chsh
    bool optimal = false;
    std::vector<double> angles;

    // paradox
    unsigned grid = 37;

    // dynamics
    std::string kind = "nonlinear";
    std::string gen = "sz";
    std::vector<double> gen_matrix;
    std::string axis;
    double axis_theta = 0.0, axis_phi = 0.0;
    double dyn_a = 0.5;
    double t_max = 2.0;
    unsigned t_steps = 81;
    bool reweighted = false;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline double to_rad(const Options& o, double v) { return o.deg ? v * kPi / 180.0 : v; }

inline io::JsonValue json_direction(const Direction& d) {
    return io::JsonValue::array_of(d.theta(), d.phi());
}

inline io::JsonValue json_vec3(const Vec3& v) { return io::JsonValue::array_of(v.x, v.y, v.z); }

inline io::JsonValue json_joint(const JointDistribution& j) {
    auto o = io::JsonValue::object();
    o["p_uu"] = j.p_uu;
    o["p_ud"] = j.p_ud;
    o["p_du"] = j.p_du;
    o["p_dd"] = j.p_dd;
    return o;
}

template <std::size_t N>
io::JsonValue json_matrix(const SquareMatrix<N>& m) {
    auto rows = io::JsonValue::array();
    for (std::size_t r = 0; r < N; ++r) {
        auto row = io::JsonValue::array();
        for (std::size_t c = 0; c < N; ++c)
            row.push_back(io::JsonValue::array_of(std::real(m(r, c)), std::imag(m(r, c))));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline io::JsonValue json_empirical(const EmpiricalDistribution& e, std::uint64_t seed) {
    auto o = io::JsonValue::object();
    o["n_up"] = e.n_up;
    o["n_down"] = e.n_down;
    o["n_total"] = e.n_total;
    o["freq_up"] = e.freq_up;
    o["freq_down"] = e.freq_down;
    o["seed"] = seed;
    return o;
}

inline io::JsonValue json_empirical_joint(const EmpiricalJoint& e, std::uint64_t seed) {
    auto o = io::JsonValue::object();
    o["n_uu"] = e.n_uu;
    o["n_ud"] = e.n_ud;
    o["n_du"] = e.n_du;
    o["n_dd"] = e.n_dd;
    o["n_total"] = e.n_total;
    const JointDistribution f = e.freq();
    o["p_uu"] = f.p_uu;
    o["p_ud"] = f.p_ud;
    o["p_du"] = f.p_du;
    o["p_dd"] = f.p_dd;
    o["seed"] = seed;
    return o;
}

inline std::string utc_timestamp() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Report skeleton shared by all subcommands: schema, command, config echo,
// optional timestamp.
inline io::JsonValue report_head(const std::string& command, const Options& o,
                                 io::JsonValue params) {
    auto rep = io::JsonValue::object();
    rep["schema"] = "qmlab/1";
    rep["command"] = command;
    auto cfg = io::JsonValue::object();
    cfg["samples"] = o.samples;
    cfg["seed"] = o.seed;
    cfg["shards"] = static_cast<std::uint64_t>(o.shards);
    cfg["format"] = o.format;
    cfg["reproducible"] = o.reproducible;
    cfg["parameters"] = std::move(params);
    rep["config"] = std::move(cfg);
    if (!o.reproducible) rep["timestamp"] = utc_timestamp();
    return rep;
}

inline int emit(const Options& o, const std::string& payload, std::ostream& out,
                std::ostream& err) {
    if (!o.output.empty()) {
        std::ofstream f(o.output, std::ios::binary);
        if (!f) {
            err << "error: cannot open output file: " << o.output << "\n";
            return kUsageError;
        }
        f << payload;
        return kOk;
    }
    out << payload;
    return kOk;
}

// ---------------------------------------------------------------------------
// machine
// ---------------------------------------------------------------------------

inline int cmd_machine(const Options& o, const CLI::App* sub, std::ostream& out,
                       std::ostream& err) {
    const bool has_angles =
        sub->count("--theta") || sub->count("--phi") || sub->count("--a");
    const bool has_xyz = sub->count("--x") || sub->count("--y") || sub->count("--z");
    if (static_cast<int>(has_angles) + static_cast<int>(has_xyz) +
            static_cast<int>(o.center) != 1)
        throw UsageError("machine: state must be given as exactly one of "
                         "(--theta/--phi/--a), (--x/--y/--z) or --center");
    if (o.weight_a < 0.0 || o.weight_a > 1.0)
        throw UsageError("machine: weight --a must lie in [0, 1]");

    const Direction u(to_rad(o, o.u_theta), to_rad(o, o.u_phi));

    BallState w = BallState::center();
    if (has_angles) {
        const Decomposition d(Direction(to_rad(o, o.theta), to_rad(o, o.phi)), o.weight_a);
        w = recompose(d);
    } else if (has_xyz) {
        w = make_ball_state(o.x, o.y, o.z);
    }

    // Oracle route through the density matrix; the measurement axis names the
    // diameter when the state is the center.
    const Decomposition d = decompose(w, u);
    const Mat2 dens = density_from_ball(d);
    const auto analytic = analytic_probability(w, u);
    const double oracle_up = trace_probability(dens, projector(u));
    const double oracle_down = trace_probability(dens, projector(u.antipode()));
    const double gap = std::max(std::abs(analytic.p_up - oracle_up),
                                std::abs(analytic.p_down - oracle_down));

    std::optional<EmpiricalDistribution> emp;
    if (o.samples > 0) emp = run_trials(w, u, o.samples, o.seed, o.shards);

    std::string payload;
    if (o.format == "json") {
        auto params = io::JsonValue::object();
        if (has_angles) {
            params["theta"] = to_rad(o, o.theta);
            params["phi"] = to_rad(o, o.phi);
            params["a"] = o.weight_a;
        } else if (has_xyz) {
            params["x"] = o.x;
            params["y"] = o.y;
            params["z"] = o.z;
        } else {
            params["center"] = true;
        }
        params["u_theta"] = u.theta();
        params["u_phi"] = u.phi();
        auto rep = report_head("machine", o, std::move(params));
        auto state = io::JsonValue::object();
        state["w"] = json_vec3(w.vec());
        auto dec = io::JsonValue::object();
        dec["v"] = json_direction(d.v);
        dec["a"] = d.a;
        dec["b"] = d.b;
        state["decomposition"] = std::move(dec);
        rep["state"] = std::move(state);
        rep["direction"] = json_direction(u);
        auto an = io::JsonValue::object();
        an["p_up"] = analytic.p_up;
        an["p_down"] = analytic.p_down;
        rep["analytic"] = std::move(an);
        auto orc = io::JsonValue::object();
        orc["p_up"] = oracle_up;
        orc["p_down"] = oracle_down;
        rep["oracle"] = std::move(orc);
        rep["oracle_gap"] = gap;
        if (emp) rep["empirical"] = json_empirical(*emp, o.seed);
        payload = rep.dump();
    } else {
        using io::format_double;
        std::vector<std::string> header = {"theta",     "phi",       "a",
                                           "b",         "u_theta",   "u_phi",
                                           "p_up",      "p_down",    "oracle_up",
                                           "oracle_down", "oracle_gap"};
        std::vector<std::string> row = {
            format_double(d.v.theta()),  format_double(d.v.phi()),   format_double(d.a),
            format_double(d.b),          format_double(u.theta()),   format_double(u.phi()),
            format_double(analytic.p_up), format_double(analytic.p_down),
            format_double(oracle_up),    format_double(oracle_down), format_double(gap)};
        if (emp) {
            for (const char* h : {"n_up", "n_down", "n_total", "freq_up", "freq_down", "seed"})
                header.push_back(h);
            row.push_back(io::format_u64(emp->n_up));
            row.push_back(io::format_u64(emp->n_down));
            row.push_back(io::format_u64(emp->n_total));
            row.push_back(format_double(emp->freq_up));
            row.push_back(format_double(emp->freq_down));
            row.push_back(io::format_u64(o.seed));
        }
        io::CsvWriter csv(std::move(header));
        csv.add_row(std::move(row));
        payload = csv.dump();
    }

    const int rc = emit(o, payload, out, err);
    return rc != kOk ? rc : gate_exit_code(gap);
}

// ---------------------------------------------------------------------------
// singlet
// ---------------------------------------------------------------------------

inline int cmd_singlet(const Options& o, const CLI::App* sub, std::ostream& out,
                       std::ostream& err) {
    const bool has_alpha = sub->count("--alpha") > 0;
    const bool has_dirs = sub->count("--u1-theta") || sub->count("--u1-phi") ||
                          sub->count("--u2-theta") || sub->count("--u2-phi");
    if (has_alpha == has_dirs)
        throw UsageError("singlet: give either --alpha or the four --u1/--u2 angles");

    const Direction u1 = has_alpha ? Direction(0.0, 0.0)
                                   : Direction(to_rad(o, o.u1_theta), to_rad(o, o.u1_phi));
    const Direction u2 = has_alpha ? Direction(to_rad(o, o.alpha), 0.0)
                                   : Direction(to_rad(o, o.u2_theta), to_rad(o, o.u2_phi));
    const double alpha = angle_between(u1, u2);

    const JointDistribution mech = singlet_joint_probability(u1, u2);
    const JointDistribution orac = joint_quantum_probability(singlet(), u1, u2);
    const double gap =
        std::max(std::max(std::abs(mech.p_uu - orac.p_uu), std::abs(mech.p_ud - orac.p_ud)),
                 std::max(std::abs(mech.p_du - orac.p_du), std::abs(mech.p_dd - orac.p_dd)));
    const auto marg = marginals(mech);

    std::optional<EmpiricalJoint> emp;
    if (o.samples > 0) emp = run_epr_trials(u1, u2, o.samples, o.seed, 0, o.shards);

    std::string payload;
    if (o.format == "json") {
        auto params = io::JsonValue::object();
        params["alpha"] = alpha;
        if (o.sweep > 0) params["sweep"] = static_cast<std::uint64_t>(o.sweep);
        auto rep = report_head("singlet", o, std::move(params));
        rep["u1"] = json_direction(u1);
        rep["u2"] = json_direction(u2);
        rep["alpha"] = alpha;
        rep["analytic"] = json_joint(mech);
        rep["oracle"] = json_joint(orac);
        rep["oracle_gap"] = gap;
        auto mg = io::JsonValue::object();
        mg["p1_up"] = marg.first;
        mg["p2_up"] = marg.second;
        rep["marginals"] = std::move(mg);
        rep["correlation"] = correlation_of(mech);
        if (emp) rep["empirical"] = json_empirical_joint(*emp, o.seed);
        if (o.sweep > 1) {
            auto rows = io::JsonValue::array();
            for (unsigned i = 0; i < o.sweep; ++i) {
                const double a = kPi * i / (o.sweep - 1);
                const JointDistribution j =
                    singlet_joint_probability(Direction(0.0), Direction(a));
                auto row = io::JsonValue::object();
                row["alpha"] = a;
                row["joint"] = json_joint(j);
                row["E"] = correlation_of(j);
                rows.push_back(std::move(row));
            }
            rep["sweep"] = std::move(rows);
        }
        payload = rep.dump();
    } else {
        using io::format_double;
        io::CsvWriter csv({"alpha", "p_uu", "p_ud", "p_du", "p_dd", "E"});
        if (o.sweep > 1) {
            for (unsigned i = 0; i < o.sweep; ++i) {
                const double a = kPi * i / (o.sweep - 1);
                const JointDistribution j =
                    singlet_joint_probability(Direction(0.0), Direction(a));
                csv.add_row({format_double(a), format_double(j.p_uu), format_double(j.p_ud),
                             format_double(j.p_du), format_double(j.p_dd),
                             format_double(correlation_of(j))});
            }
        } else {
            csv.add_row({format_double(alpha), format_double(mech.p_uu),
                         format_double(mech.p_ud), format_double(mech.p_du),
                         format_double(mech.p_dd), format_double(correlation_of(mech))});
        }
        payload = csv.dump();
    }

    const int rc = emit(o, payload, out, err);
    return rc != kOk ? rc : gate_exit_code(gap);
}

// ---------------------------------------------------------------------------
// chsh
// ---------------------------------------------------------------------------

inline int cmd_chsh(const Options& o, const CLI::App* sub, std::ostream& out, std::ostream& err) {
    const bool has_angles = sub->count("--angles") > 0;
    if (o.optimal == has_angles)
        throw UsageError("chsh: give either --optimal or --angles A A' B B'");

    std::vector<double> chi = o.optimal
                                  ? std::vector<double>{0.0, 0.5 * kPi, 0.25 * kPi, 0.75 * kPi}
                                  : o.angles;
    if (!o.optimal)
        for (double& v : chi) v = to_rad(o, v);

    const ChshSetting setting = ChshSetting::coplanar(chi[0], chi[1], chi[2], chi[3]);
    const double e_ab = correlation(setting.a, setting.b);
    const double e_abp = correlation(setting.a, setting.b_prime);
    const double e_apb = correlation(setting.a_prime, setting.b);
    const double e_apbp = correlation(setting.a_prime, setting.b_prime);
    const double s = e_ab - e_abp + e_apb + e_apbp;

    struct EmpiricalChsh {
        double e_ab, e_abp, e_apb, e_apbp, s;
    };
    std::optional<EmpiricalChsh> emp;
    if (o.samples > 0) {
        const Direction* pairs[4][2] = {{&setting.a, &setting.b},
                                        {&setting.a, &setting.b_prime},
                                        {&setting.a_prime, &setting.b},
                                        {&setting.a_prime, &setting.b_prime}};
        double e[4];
        for (int k = 0; k < 4; ++k)
            e[k] = run_epr_trials(*pairs[k][0], *pairs[k][1], o.samples, o.seed,
                                  static_cast<std::uint64_t>(k), o.shards)
                       .correlation();
        emp = EmpiricalChsh{e[0], e[1], e[2], e[3], e[0] - e[1] + e[2] + e[3]};
    }

    std::string payload;
    if (o.format == "json") {
        auto params = io::JsonValue::object();
        params["angles"] = io::JsonValue::array_of(chi[0], chi[1], chi[2], chi[3]);
        params["optimal"] = o.optimal;
        auto rep = report_head("chsh", o, std::move(params));
        auto st = io::JsonValue::object();
        st["a"] = json_direction(setting.a);
        st["a_prime"] = json_direction(setting.a_prime);
        st["b"] = json_direction(setting.b);
        st["b_prime"] = json_direction(setting.b_prime);
        rep["setting"] = std::move(st);
        auto corr = io::JsonValue::object();
        corr["e_ab"] = e_ab;
        corr["e_ab_prime"] = e_abp;
        corr["e_a_prime_b"] = e_apb;
        corr["e_a_prime_b_prime"] = e_apbp;
        rep["correlations"] = std::move(corr);
        rep["s"] = s;
        rep["abs_s"] = std::abs(s);
        rep["violates_classical_bound"] = std::abs(s) > 2.0;
        if (emp) {
            auto em = io::JsonValue::object();
            em["e_ab"] = emp->e_ab;
            em["e_ab_prime"] = emp->e_abp;
            em["e_a_prime_b"] = emp->e_apb;
            em["e_a_prime_b_prime"] = emp->e_apbp;
            em["s"] = emp->s;
            em["abs_s"] = std::abs(emp->s);
            em["seed"] = o.seed;
            rep["empirical"] = std::move(em);
        }
        payload = rep.dump();
    } else {
        using io::format_double;
        std::vector<std::string> header = {"angle_a",  "angle_a_prime", "angle_b",
                                           "angle_b_prime", "e_ab",     "e_ab_prime",
                                           "e_a_prime_b",   "e_a_prime_b_prime", "s"};
        std::vector<std::string> row = {format_double(chi[0]), format_double(chi[1]),
                                        format_double(chi[2]), format_double(chi[3]),
                                        format_double(e_ab),   format_double(e_abp),
                                        format_double(e_apb),  format_double(e_apbp),
                                        format_double(s)};
        if (emp) {
            header.push_back("s_empirical");
            header.push_back("seed");
            row.push_back(format_double(emp->s));
            row.push_back(io::format_u64(o.seed));
        }
        io::CsvWriter csv(std::move(header));
        csv.add_row(std::move(row));
        payload = csv.dump();
    }

    return emit(o, payload, out, err);
}

// ---------------------------------------------------------------------------
// paradox
// ---------------------------------------------------------------------------

inline int cmd_paradox(const Options& o, const CLI::App*, std::ostream& out, std::ostream& err) {
    if (o.grid < 2) throw UsageError("paradox: --grid must be at least 2");

    const Mat4 singlet_proj = projector_onto(singlet());
    const Mat2 reduced1 = partial_trace(singlet_proj, 1);
    const Mat2 reduced2 = partial_trace(singlet_proj, 2);
    const Mat2 half_identity = 0.5 * Mat2::identity();
    const double reduced_gap = std::max(max_abs_entry(reduced1 - half_identity),
                                        max_abs_entry(reduced2 - half_identity));
    const Mat4 product_density = tensor(half_identity, half_identity);

    struct Row {
        double alpha;
        JointDistribution singlet_joint;
        JointDistribution product_joint;
        double tv;
        double marginal_gap;
    };
    std::vector<Row> rows;
    double tv_max = 0.0, marginal_gap_max = 0.0;
    const BallState c = BallState::center();
    for (unsigned i = 0; i < o.grid; ++i) {
        const double alpha = kPi * i / (o.grid - 1);
        const Direction u1(0.0), u2(alpha);
        const JointDistribution sj = singlet_joint_probability(u1, u2);
        const JointDistribution pj = product_joint_probability(c, c, u1, u2);
        const auto ms = marginals(sj);
        const auto mp = marginals(pj);
        const double mgap = std::max(std::abs(ms.first - mp.first),
                                     std::abs(ms.second - mp.second));
        const double tv = tv_distance(sj, pj);
        rows.push_back({alpha, sj, pj, tv, mgap});
        tv_max = std::max(tv_max, tv);
        marginal_gap_max = std::max(marginal_gap_max, mgap);
    }

    std::string payload;
    if (o.format == "json") {
        auto params = io::JsonValue::object();
        params["grid"] = static_cast<std::uint64_t>(o.grid);
        auto rep = report_head("paradox", o, std::move(params));
        rep["reduced_1"] = json_matrix(reduced1);
        rep["reduced_2"] = json_matrix(reduced2);
        rep["reduced_gap"] = reduced_gap;
        rep["product_density"] = json_matrix(product_density);
        auto sweep = io::JsonValue::array();
        for (const Row& r : rows) {
            auto row = io::JsonValue::object();
            row["alpha"] = r.alpha;
            row["singlet"] = json_joint(r.singlet_joint);
            row["product"] = json_joint(r.product_joint);
            row["tv"] = r.tv;
            row["marginal_gap"] = r.marginal_gap;
            sweep.push_back(std::move(row));
        }
        rep["sweep"] = std::move(sweep);
        rep["tv_max"] = tv_max;
        auto argmax = io::JsonValue::array();
        for (const Row& r : rows)
            if (r.tv >= tv_max - 1e-12) argmax.push_back(io::JsonValue(r.alpha));
        rep["tv_argmax"] = std::move(argmax);
        rep["marginal_gap_max"] = marginal_gap_max;
        payload = rep.dump();
    } else {
        using io::format_double;
        io::CsvWriter csv({"alpha", "p_uu", "p_ud", "p_du", "p_dd", "E", "tv"});
        for (const Row& r : rows)
            csv.add_row({format_double(r.alpha), format_double(r.singlet_joint.p_uu),
                         format_double(r.singlet_joint.p_ud), format_double(r.singlet_joint.p_du),
                         format_double(r.singlet_joint.p_dd),
                         format_double(correlation_of(r.singlet_joint)), format_double(r.tv)});
        payload = csv.dump();
    }

    const int rc = emit(o, payload, out, err);
    return rc != kOk ? rc : gate_exit_code(std::max(reduced_gap, marginal_gap_max));
}

// ---------------------------------------------------------------------------
// dynamics
// ---------------------------------------------------------------------------

inline int cmd_dynamics(const Options& o, const CLI::App* sub, std::ostream& out,
                        std::ostream& err) {
    EvolutionKind kind;
    if (o.kind == "unitary")
        kind = EvolutionKind::unitary;
    else if (o.kind == "nonlinear")
        kind = EvolutionKind::nonlinear;
    else
        throw UsageError("dynamics: --kind must be unitary or nonlinear");

    Mat2 generator;
    if (!o.gen_matrix.empty()) {
        // (g00, g11, Re g01, Im g01), Hermitian by construction
        const cplx off(o.gen_matrix[2], o.gen_matrix[3]);
        generator = Mat2{o.gen_matrix[0], off, std::conj(off), o.gen_matrix[1]};
    } else if (o.gen == "sx") {
        generator = pauli_x();
    } else if (o.gen == "sy") {
        generator = pauli_y();
    } else if (o.gen == "sz") {
        generator = pauli_z();
    } else {
        throw UsageError("dynamics: --gen must be sx, sy or sz (or use --gen-matrix)");
    }

    const bool has_named_axis = !o.axis.empty();
    const bool has_angle_axis = sub->count("--axis-theta") || sub->count("--axis-phi");
    if (has_named_axis == has_angle_axis)
        throw UsageError("dynamics: the decomposition axis is required; give --axis x|y|z "
                         "or --axis-theta/--axis-phi");
    Direction axis(0.0);
    if (has_named_axis) {
        if (o.axis == "x")
            axis = Direction::from_vector({1.0, 0.0, 0.0});
        else if (o.axis == "y")
            axis = Direction::from_vector({0.0, 1.0, 0.0});
        else if (o.axis == "z")
            axis = Direction(0.0);
        else
            throw UsageError("dynamics: --axis must be x, y or z");
    } else {
        axis = Direction(to_rad(o, o.axis_theta), to_rad(o, o.axis_phi));
    }

    if (o.dyn_a < 0.0 || o.dyn_a > 1.0) throw UsageError("dynamics: --a must lie in [0, 1]");
    if (o.t_steps < 2) throw UsageError("dynamics: --t-steps must be at least 2");
    if (!(o.t_max > 0.0)) throw UsageError("dynamics: --t-max must be positive");

    const Decomposition d(axis, o.dyn_a);
    std::vector<double> grid(o.t_steps);
    for (unsigned i = 0; i < o.t_steps; ++i)
        grid[i] = o.t_max * static_cast<double>(i) / (o.t_steps - 1);

    const EvolutionSpec spec{generator, kind, 0.0};
    const LiftTrajectory traj = divergence_trajectory(d, spec, grid, o.reweighted);

    std::string payload;
    if (o.format == "json") {
        auto params = io::JsonValue::object();
        params["kind"] = o.kind;
        params["generator"] = json_matrix(generator);
        params["axis"] = json_direction(axis);
        params["a"] = d.a;
        params["b"] = d.b;
        params["t_max"] = o.t_max;
        params["t_steps"] = static_cast<std::uint64_t>(o.t_steps);
        params["reweighted_mixture"] = o.reweighted;
        auto rep = report_head("dynamics", o, std::move(params));
        auto rows = io::JsonValue::array();
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
            auto row = io::JsonValue::object();
            row["t"] = traj.times[i];
            row["mixture"] = json_vec3(traj.mixture_points[i].vec());
            row["pure"] = json_vec3(traj.pure_points[i].vec());
            row["divergence"] = traj.divergence[i];
            rows.push_back(std::move(row));
        }
        rep["trajectory"] = std::move(rows);
        rep["max_divergence"] = traj.max_divergence();
        rep["argmax_t"] = traj.argmax_t();
        payload = rep.dump();
    } else {
        using io::format_double;
        io::CsvWriter csv(
            {"t", "mix_x", "mix_y", "mix_z", "pure_x", "pure_y", "pure_z", "divergence"});
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
            const Vec3& m = traj.mixture_points[i].vec();
            const Vec3& p = traj.pure_points[i].vec();
            csv.add_row({format_double(traj.times[i]), format_double(m.x), format_double(m.y),
                         format_double(m.z), format_double(p.x), format_double(p.y),
                         format_double(p.z), format_double(traj.divergence[i])});
        }
        payload = csv.dump();
    }

    return emit(o, payload, out, err);
}

// ---------------------------------------------------------------------------
// argument plumbing
// ---------------------------------------------------------------------------

inline void add_common_options(CLI::App* sub, Options& o) {
    sub->add_option("--samples", o.samples, "Monte-Carlo trials (0 = analytic only)");
    sub->add_option("--seed", o.seed, "seed for the random stream");
    sub->add_option("--shards", o.shards, "worker shards for sampling");
    sub->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--output", o.output, "write the report to a file");
    sub->add_flag("--reproducible", o.reproducible, "omit the timestamp field");
    sub->add_flag("--deg", o.deg, "interpret angle arguments as degrees");
}

// Pull `--config FILE` out of the argument list and append one token pair per
// key that the command line does not already set. Flat JSON object only.
inline void merge_config_file(std::vector<std::string>& args) {
    std::string path;
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
        if (args[i] == "--config") {
            path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                       args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
            break;
        }
    }
    if (path.empty()) return;

    std::ifstream f(path);
    if (!f) throw UsageError("cannot open config file: " + path);
    nlohmann::json cfg = nlohmann::json::parse(f);
    if (!cfg.is_object()) throw UsageError("config file must hold a flat JSON object");

    for (const auto& [key, value] : cfg.items()) {
        const std::string flag = "--" + key;
        bool present = false;
        for (const std::string& a : args)
            if (a == flag || a.rfind(flag + "=", 0) == 0) {
                present = true;
                break;
            }
        if (present) continue;
        if (value.is_boolean()) {
            if (value.get<bool>()) args.push_back(flag);
        } else if (value.is_array()) {
            args.push_back(flag);
            for (const auto& v : value) args.push_back(v.dump());
        } else if (value.is_string()) {
            args.push_back(flag);
            args.push_back(value.get<std::string>());
        } else {
            args.push_back(flag);
            args.push_back(value.dump());
        }
    }
}

}  // namespace detail

// Run the CLI on an argument vector (program name excluded). All report text
// goes to `out`, diagnostics to `err`.
inline int run(std::vector<std::string> args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
    detail::Options o;
    CLI::App app{"qmlab: a mechanistic spin-1/2 measurement simulator"};
    app.require_subcommand(1);

    CLI::App* machine = app.add_subcommand("machine", "single-machine measurement statistics");
    machine->add_option("--theta", o.theta, "decomposition axis polar angle");
    machine->add_option("--phi", o.phi, "decomposition axis azimuth");
    machine->add_option("--a", o.weight_a, "weight of the +v ray (b = 1 - a)");
    machine->add_option("--x", o.x, "state x coordinate");
    machine->add_option("--y", o.y, "state y coordinate");
    machine->add_option("--z", o.z, "state z coordinate");
    machine->add_flag("--center", o.center, "state at the ball center");
    machine->add_option("--u-theta", o.u_theta, "measurement direction polar angle");
    machine->add_option("--u-phi", o.u_phi, "measurement direction azimuth");
    detail::add_common_options(machine, o);

    CLI::App* singlet = app.add_subcommand("singlet", "rigid-rod singlet joint statistics");
    singlet->add_option("--alpha", o.alpha, "angle between the two measurement directions");
    singlet->add_option("--u1-theta", o.u1_theta, "side-1 direction polar angle");
    singlet->add_option("--u1-phi", o.u1_phi, "side-1 direction azimuth");
    singlet->add_option("--u2-theta", o.u2_theta, "side-2 direction polar angle");
    singlet->add_option("--u2-phi", o.u2_phi, "side-2 direction azimuth");
    singlet->add_option("--sweep", o.sweep, "emit an angle sweep with this many points");
    detail::add_common_options(singlet, o);

    CLI::App* chsh = app.add_subcommand("chsh", "four-setting Bell-test combination");
    chsh->add_flag("--optimal", o.optimal, "use the Tsirelson-saturating setting");
    chsh->add_option("--angles", o.angles, "coplanar angles a a' b b'")->expected(4);
    detail::add_common_options(chsh, o);

    CLI::App* paradox =
        app.add_subcommand("paradox", "equal reduced states, different joint states");
    paradox->add_option("--grid", o.grid, "number of sweep angles on [0, pi]");
    detail::add_common_options(paradox, o);

    CLI::App* dynamics = app.add_subcommand("dynamics", "mixture lift vs pure lift");
    dynamics->add_option("--kind", o.kind, "evolution kind: unitary | nonlinear");
    dynamics->add_option("--gen", o.gen, "named Hermitian generator: sx | sy | sz");
    dynamics->add_option("--gen-matrix", o.gen_matrix, "generator as g00 g11 Re(g01) Im(g01)")
        ->expected(4);
    dynamics->add_option("--axis", o.axis, "decomposition axis: x | y | z");
    dynamics->add_option("--axis-theta", o.axis_theta, "decomposition axis polar angle");
    dynamics->add_option("--axis-phi", o.axis_phi, "decomposition axis azimuth");
    dynamics->add_option("--a", o.dyn_a, "weight of the +v ray (b = 1 - a)");
    dynamics->add_option("--t-max", o.t_max, "end of the time grid");
    dynamics->add_option("--t-steps", o.t_steps, "number of grid points");
    dynamics->add_flag("--reweighted-mixture", o.reweighted,
                       "reweight mixture weights by evolved branch norms");
    detail::add_common_options(dynamics, o);

    try {
        detail::merge_config_file(args);
        // CLI11 wants the argument list reversed, program name removed.
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? kOk : kUsageError;
    } catch (const detail::UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    }

    try {
        if (o.samples > 0) {
            const CLI::App* sub = app.get_subcommands().front();
            if (sub->count("--seed") == 0)
                throw detail::UsageError("--seed is required when --samples > 0");
        }
        const CLI::App* sub = app.get_subcommands().front();
        if (machine->parsed()) return detail::cmd_machine(o, machine, out, err);
        if (singlet->parsed()) return detail::cmd_singlet(o, singlet, out, err);
        if (chsh->parsed()) return detail::cmd_chsh(o, chsh, out, err);
        if (paradox->parsed()) return detail::cmd_paradox(o, paradox, out, err);
        if (dynamics->parsed()) return detail::cmd_dynamics(o, dynamics, out, err);
        (void)sub;
        err << "error: no subcommand given\n";
        return kUsageError;
    } catch (const detail::UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    }
}

inline int run(int argc, char** argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(std::move(args), out, err);
}

}  // namespace qmlab::cli
