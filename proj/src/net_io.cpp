#include "wosnet/net_io.hpp"

#include <fstream>

namespace wosnet::io {

namespace {

json vector_to_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

Eigen::VectorXd vector_from_json(const json& a) {
    Eigen::VectorXd v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<Eigen::Index>(i)) = a[i].get<double>();
    return v;
}

json write_file(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
    return j;
}

json read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    return json::parse(in);
}

}  // namespace

json network_to_json(const relu::ReluNet& net) {
    json j;
    json dims = json::array();
    dims.push_back(net.input_dim());
    for (const auto& layer : net.layers()) dims.push_back(static_cast<int>(layer.A.rows()));
    j["dims"] = dims;
    json layers = json::array();
    for (const auto& layer : net.layers()) {
        json rows = json::array();
        for (Eigen::Index r = 0; r < layer.A.rows(); ++r) rows.push_back(vector_to_json(layer.A.row(r)));
        layers.push_back({{"A", rows}, {"b", vector_to_json(layer.b)}});
    }
    j["layers"] = layers;
    return j;
}

relu::ReluNet network_from_json(const json& j) {
    const auto& dims = j.at("dims");
    const auto& jlayers = j.at("layers");
    if (dims.size() != jlayers.size() + 1)
        throw std::runtime_error("network json: dims must have one more entry than layers");
    std::vector<relu::Layer> layers;
    layers.reserve(jlayers.size());
    for (std::size_t l = 0; l < jlayers.size(); ++l) {
        const auto rows = dims[l + 1].get<Eigen::Index>();
        const auto cols = dims[l].get<Eigen::Index>();
        const auto& jA = jlayers[l].at("A");
        if (static_cast<Eigen::Index>(jA.size()) != rows)
            throw std::runtime_error("network json: layer row count does not match dims");
        relu::Matrix A(rows, cols);
        for (Eigen::Index r = 0; r < rows; ++r) {
            const auto& jrow = jA[static_cast<std::size_t>(r)];
            if (static_cast<Eigen::Index>(jrow.size()) != cols)
                throw std::runtime_error("network json: layer column count does not match dims");
            A.row(r) = vector_from_json(jrow);
        }
        relu::Vector b = vector_from_json(jlayers[l].at("b"));
        if (b.size() != rows) throw std::runtime_error("network json: bias length mismatch");
        layers.push_back({std::move(A), std::move(b)});
    }
    return relu::ReluNet(std::move(layers));
}

void save_network(const relu::ReluNet& net, const std::string& path) {
    write_file(network_to_json(net), path);
}

relu::ReluNet load_network(const std::string& path) { return network_from_json(read_file(path)); }

json tableau_to_json(const RandomTableau& t) {
    json j;
    j["seed"] = t.seed;
    j["M"] = t.M;
    j["M1"] = t.M1;
    j["M2"] = t.M2;
    j["eps"] = t.eps;
    j["hard_cap"] = t.hard_cap;
    j["caps1"] = t.caps1;
    j["caps2"] = t.caps2;
    j["any_capped"] = t.any_capped;
    json dirs = json::array();
    for (const auto& row : t.directions) {
        json r = json::array();
        for (const auto& y : row) r.push_back(vector_to_json(y));
        dirs.push_back(r);
    }
    j["directions"] = dirs;
    json inner = json::array();
    for (const auto& row : t.inner_points) {
        json r = json::array();
        for (const auto& step : row) {
            json s = json::array();
            for (const auto& y : step) s.push_back(vector_to_json(y));
            r.push_back(s);
        }
        inner.push_back(r);
    }
    j["inner_points"] = inner;
    return j;
}

RandomTableau tableau_from_json(const json& j) {
    RandomTableau t;
    t.seed = j.at("seed").get<std::uint64_t>();
    t.M = j.at("M").get<long>();
    t.M1 = j.at("M1").get<long>();
    t.M2 = j.at("M2").get<long>();
    t.eps = j.at("eps").get<double>();
    t.hard_cap = j.at("hard_cap").get<long>();
    t.caps1 = j.at("caps1").get<std::vector<long>>();
    t.caps2 = j.at("caps2").get<std::vector<long>>();
    t.any_capped = j.at("any_capped").get<bool>();
    for (const auto& row : j.at("directions")) {
        std::vector<Vector> r;
        for (const auto& y : row) r.push_back(vector_from_json(y));
        t.directions.push_back(std::move(r));
    }
    for (const auto& row : j.at("inner_points")) {
        std::vector<std::vector<Vector>> r;
        for (const auto& step : row) {
            std::vector<Vector> s;
            for (const auto& y : step) s.push_back(vector_from_json(y));
            r.push_back(std::move(s));
        }
        t.inner_points.push_back(std::move(r));
    }
    return t;
}

void save_tableau(const RandomTableau& t, const std::string& path) {
    write_file(tableau_to_json(t), path);
}

RandomTableau load_tableau(const std::string& path) { return tableau_from_json(read_file(path)); }

json plan_to_json(const SynthesisPlan& p) {
    return json{
        {"delta_bar", p.delta_bar},
        {"delta1", p.delta1},
        {"delta2", p.delta2},
        {"eps", p.eps},
        {"delta_g", p.delta_g},
        {"delta_f", p.delta_f},
        {"delta_tilde", p.delta_tilde},
        {"delta_dist", p.delta_dist},
        {"M", p.M},
        {"M1", p.M1},
        {"M2", p.M2},
        {"hard_cap", p.hard_cap},
        {"prod_range", p.prod_range},
        {"size_budget", p.size_budget},
        {"constants",
         {{"c", p.constants.c},
          {"c_prime", p.constants.c_prime},
          {"c_dprime", p.constants.c_dprime},
          {"C", p.constants.C},
          {"C_prime2", p.constants.C_prime2},
          {"c_sqrt", p.constants.c_sqrt}}},
        {"norms",
         {{"f_inf", p.norms.f_inf},
          {"g_inf", p.norms.g_inf},
          {"lap_g_inf", p.norms.lap_g_inf},
          {"lip_f", p.norms.lip_f},
          {"lip_g", p.norms.lip_g}}},
    };
}

SynthesisPlan plan_from_json(const json& j) {
    SynthesisPlan p;
    p.delta_bar = j.at("delta_bar").get<double>();
    p.delta1 = j.at("delta1").get<double>();
    p.delta2 = j.at("delta2").get<double>();
    p.eps = j.at("eps").get<double>();
    p.delta_g = j.at("delta_g").get<double>();
    p.delta_f = j.at("delta_f").get<double>();
    p.delta_tilde = j.at("delta_tilde").get<double>();
    p.delta_dist = j.at("delta_dist").get<double>();
    p.M = j.at("M").get<long>();
    p.M1 = j.at("M1").get<long>();
    p.M2 = j.at("M2").get<long>();
    p.hard_cap = j.at("hard_cap").get<long>();
    p.prod_range = j.at("prod_range").get<double>();
    p.size_budget = j.at("size_budget").get<double>();
    const auto& c = j.at("constants");
    p.constants.c = c.at("c").get<double>();
    p.constants.c_prime = c.at("c_prime").get<double>();
    p.constants.c_dprime = c.at("c_dprime").get<double>();
    p.constants.C = c.at("C").get<double>();
    p.constants.C_prime2 = c.at("C_prime2").get<double>();
    p.constants.c_sqrt = c.at("c_sqrt").get<double>();
    const auto& n = j.at("norms");
    p.norms.f_inf = n.at("f_inf").get<double>();
    p.norms.g_inf = n.at("g_inf").get<double>();
    p.norms.lap_g_inf = n.at("lap_g_inf").get<double>();
    p.norms.lip_f = n.at("lip_f").get<double>();
    p.norms.lip_g = n.at("lip_g").get<double>();
    return p;
}

}  // namespace wosnet::io
