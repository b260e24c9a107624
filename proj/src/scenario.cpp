#include "distfobs/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace distfobs {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ParseError(msg); }

Matrix parse_matrix(const json& j, const std::string& name, long expect_cols) {
    if (!j.is_array()) fail(name + " must be an array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    if (rows == 0) return Matrix::Zero(0, expect_cols);
    Eigen::Index cols = -1;
    Matrix m;
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto& row = j[static_cast<size_t>(i)];
        if (!row.is_array()) fail(name + " rows must be arrays");
        if (cols < 0) {
            cols = static_cast<Eigen::Index>(row.size());
            if (expect_cols >= 0 && cols != expect_cols)
                fail(name + " must have " + std::to_string(expect_cols) +
                     " columns");
            m = Matrix(rows, cols);
        }
        if (static_cast<Eigen::Index>(row.size()) != cols)
            fail(name + " rows have inconsistent lengths");
        for (Eigen::Index c = 0; c < cols; ++c) {
            const auto& v = row[static_cast<size_t>(c)];
            if (!v.is_number()) fail(name + " entries must be numbers");
            m(i, c) = v.get<double>();
        }
    }
    return m;
}

Vector parse_vector(const json& j, const std::string& name, long expect_len) {
    if (!j.is_array()) fail(name + " must be an array");
    if (expect_len >= 0 && static_cast<long>(j.size()) != expect_len)
        fail(name + " must have length " + std::to_string(expect_len));
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) fail(name + " entries must be numbers");
        v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    }
    return v;
}

}  // namespace

Scenario parse_scenario(const nlohmann::json& j) {
    if (!j.is_object()) fail("scenario must be a JSON object");
    static const std::set<std::string> known = {
        "n", "A", "sensors", "L", "edges", "x0", "horizon", "rho", "mode",
        "tolerances", "naive_params", "initial_estimates", "precision_bits",
        "seed"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key())) fail("unknown scenario key '" + it.key() + "'");
    for (const char* req : {"n", "A", "sensors", "L", "edges"})
        if (!j.contains(req)) fail(std::string("missing scenario key '") + req + "'");

    if (!j["n"].is_number_integer() || j["n"].get<long>() < 1)
        fail("n must be a positive integer");
    const long n = j["n"].get<long>();

    const Matrix A = parse_matrix(j["A"], "A", n);
    if (A.rows() != n) fail("A must be n x n");

    if (!j["sensors"].is_array() || j["sensors"].empty())
        fail("sensors must be a non-empty array (one entry per node)");
    std::vector<Matrix> sensors;
    for (size_t i = 0; i < j["sensors"].size(); ++i)
        sensors.push_back(parse_matrix(j["sensors"][i],
                                       "sensors[" + std::to_string(i) + "]", n));
    const int N = static_cast<int>(sensors.size());

    const Matrix L = parse_matrix(j["L"], "L", n);
    if (L.rows() < 1) fail("L must have at least one row");

    DiGraph g(N);
    if (!j["edges"].is_array()) fail("edges must be an array of [from, to]");
    for (const auto& e : j["edges"]) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
            !e[1].is_number_integer())
            fail("edges entries must be [from, to] integer pairs");
        const int from = e[0].get<int>();
        const int to = e[1].get<int>();
        if (from < 1 || from > N || to < 1 || to > N)
            fail("edge endpoint outside 1..N");
        g.add_edge(from, to);
    }

    Scenario sc{SystemModel{A, std::move(sensors), L, std::move(g)}};
    sc.x0 = Vector::Ones(n);

    if (j.contains("x0")) sc.x0 = parse_vector(j["x0"], "x0", n);
    if (j.contains("horizon")) {
        if (!j["horizon"].is_number_integer() || j["horizon"].get<long>() < 1)
            fail("horizon must be a positive integer");
        sc.horizon = j["horizon"].get<long>();
    }
    if (j.contains("rho")) {
        if (!j["rho"].is_number() || j["rho"].get<double>() < 0.0)
            fail("rho must be a non-negative number");
        sc.rho = j["rho"].get<double>();
    }
    if (j.contains("mode")) {
        const std::string m = j["mode"].get<std::string>();
        if (m == "proposed") sc.mode = SimMode::proposed;
        else if (m == "naive") sc.mode = SimMode::naive;
        else fail("mode must be 'proposed' or 'naive'");
    }
    if (j.contains("tolerances")) {
        const auto& t = j["tolerances"];
        if (!t.is_object()) fail("tolerances must be an object");
        for (auto it = t.begin(); it != t.end(); ++it) {
            const std::string& k = it.key();
            if (!it.value().is_number()) fail("tolerance '" + k + "' must be a number");
            const double v = it.value().get<double>();
            if (k == "rank_tol") sc.tol.rank_tol = v;
            else if (k == "residual_tol") sc.tol.residual_tol = v;
            else if (k == "stability_margin") sc.tol.stability_margin = v;
            else fail("unknown tolerance '" + k + "'");
        }
    }
    if (j.contains("naive_params")) {
        const auto& p = j["naive_params"];
        if (!p.is_object()) fail("naive_params must be an object");
        for (const char* req : {"alpha", "beta", "weights"})
            if (!p.contains(req))
                fail(std::string("naive_params missing '") + req + "'");
        for (auto it = p.begin(); it != p.end(); ++it) {
            const std::string& k = it.key();
            if (k != "alpha" && k != "beta" && k != "weights")
                fail("unknown naive_params key '" + k + "'");
        }
        NaiveParams np;
        np.alphas = parse_vector(p["alpha"], "naive_params.alpha", N);
        np.betas = parse_vector(p["beta"], "naive_params.beta", N);
        np.weights = parse_matrix(p["weights"], "naive_params.weights", N);
        if (np.weights.rows() != N) fail("naive_params.weights must be N x N");
        sc.naive = std::move(np);
    }
    if (j.contains("initial_estimates")) {
        const auto& e = j["initial_estimates"];
        if (!e.is_array() || static_cast<int>(e.size()) != N)
            fail("initial_estimates must list one vector per node");
        std::vector<Vector> init;
        for (size_t i = 0; i < e.size(); ++i)
            init.push_back(parse_vector(
                e[i], "initial_estimates[" + std::to_string(i) + "]", -1));
        sc.initial_estimates = std::move(init);
    }
    if (j.contains("precision_bits")) {
        if (!j["precision_bits"].is_number_integer() ||
            j["precision_bits"].get<long>() < 24)
            fail("precision_bits must be an integer >= 24");
        sc.precision_bits = j["precision_bits"].get<long>();
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
            fail("seed must be an unsigned integer");
        sc.seed = j["seed"].get<std::uint64_t>();
    }
    return sc;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scenario file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(buf.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("scenario JSON: ") + e.what());
    }
    return parse_scenario(j);
}

}  // namespace distfobs
