#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wosnet/net_io.hpp"
#include "wosnet/problems.hpp"
#include "wosnet/relu_builders.hpp"
#include "wosnet/synthesis.hpp"
#include "wosnet/verify.hpp"
#include "wosnet/wos.hpp"

namespace py = pybind11;
using namespace wosnet;

PYBIND11_MODULE(_core, m) {
    m.doc() = "walk-on-the-sphere Poisson solver and ReLU network synthesizer";

    py::register_exception<SizeBudgetError>(m, "SizeBudgetError");

    py::class_<ConvexDomain>(m, "ConvexDomain")
        .def_static("ball", &ConvexDomain::ball, py::arg("dim"), py::arg("radius") = 1.0)
        .def_static("cube", &ConvexDomain::cube, py::arg("dim"), py::arg("side") = 1.0)
        .def_property_readonly("dim", &ConvexDomain::dim)
        .def_property_readonly("diameter", &ConvexDomain::diameter)
        .def_property_readonly("volume", &ConvexDomain::volume)
        .def("dist_to_boundary", &ConvexDomain::dist_to_boundary)
        .def("contains", &ConvexDomain::contains, py::arg("x"), py::arg("tol") = kBoundaryTol)
        .def("kind_name", &ConvexDomain::kind_name);

    py::class_<WosEstimate>(m, "WosEstimate")
        .def_readonly("value", &WosEstimate::value)
        .def_readonly("std_error", &WosEstimate::std_error)
        .def_readonly("n_outer", &WosEstimate::n_outer)
        .def_readonly("n_inner", &WosEstimate::n_inner)
        .def_readonly("eps", &WosEstimate::eps)
        .def_readonly("any_capped", &WosEstimate::any_capped);

    py::class_<SolveConfig>(m, "SolveConfig")
        .def(py::init<>())
        .def_readwrite("m", &SolveConfig::m)
        .def_readwrite("m2", &SolveConfig::m2)
        .def_readwrite("eps", &SolveConfig::eps)
        .def_readwrite("cap", &SolveConfig::cap)
        .def_readwrite("threads", &SolveConfig::threads)
        .def_readwrite("seed", &SolveConfig::seed);

    m.def(
        "solve_point",
        [](const ConvexDomain& domain, const std::optional<ScalarField>& f, const ScalarField& g,
           const Vector& x, const SolveConfig& cfg) {
            const ScalarField* fp = f ? &*f : nullptr;
            return solve_point(domain, fp, g, x, cfg);
        },
        py::arg("domain"), py::arg("f"), py::arg("g"), py::arg("x"),
        py::arg("config") = SolveConfig{},
        // release the GIL so worker threads can acquire it per callback
        py::call_guard<py::gil_scoped_release>());

    py::class_<relu::ReluNet>(m, "ReluNet")
        .def_property_readonly("input_dim", &relu::ReluNet::input_dim)
        .def_property_readonly("output_dim", &relu::ReluNet::output_dim)
        .def_property_readonly("depth", &relu::ReluNet::depth)
        .def_property_readonly("width", &relu::ReluNet::width)
        .def_property_readonly("size", &relu::ReluNet::size)
        .def("eval", &relu::ReluNet::eval)
        .def("eval1", &relu::ReluNet::eval1)
        .def("__call__", &relu::ReluNet::eval1);

    m.def("compose", &relu::compose);
    m.def("linear_combination", &relu::linear_combination);
    m.def("build_square", &relu::build_square);
    m.def("build_product", &relu::build_product, py::arg("delta"), py::arg("c"));
    m.def("build_sqrt", &relu::build_sqrt, py::arg("delta_bar"), py::arg("c_sqrt") = 64.0);
    m.def("build_dist_cube", &relu::build_dist_cube);
    m.def("build_dist_ball", &relu::build_dist_ball);
    m.def("make_dist_net", &make_dist_net);
    m.def("save_network", &io::save_network);
    m.def("load_network", &io::load_network);

    py::class_<ProblemNorms>(m, "ProblemNorms")
        .def(py::init<>())
        .def_readwrite("f_inf", &ProblemNorms::f_inf)
        .def_readwrite("g_inf", &ProblemNorms::g_inf)
        .def_readwrite("lap_g_inf", &ProblemNorms::lap_g_inf)
        .def_readwrite("lip_f", &ProblemNorms::lip_f)
        .def_readwrite("lip_g", &ProblemNorms::lip_g);

    py::class_<PlanOverrides>(m, "PlanOverrides")
        .def(py::init<>())
        .def_readwrite("M", &PlanOverrides::M)
        .def_readwrite("M1", &PlanOverrides::M1)
        .def_readwrite("M2", &PlanOverrides::M2)
        .def_readwrite("eps", &PlanOverrides::eps)
        .def_readwrite("delta_dist", &PlanOverrides::delta_dist)
        .def_readwrite("hard_cap", &PlanOverrides::hard_cap)
        .def_readwrite("size_budget", &PlanOverrides::size_budget);

    py::class_<SynthesisPlan>(m, "SynthesisPlan")
        .def_readonly("delta_bar", &SynthesisPlan::delta_bar)
        .def_readonly("delta1", &SynthesisPlan::delta1)
        .def_readonly("delta2", &SynthesisPlan::delta2)
        .def_readonly("eps", &SynthesisPlan::eps)
        .def_readonly("delta_g", &SynthesisPlan::delta_g)
        .def_readonly("delta_f", &SynthesisPlan::delta_f)
        .def_readonly("delta_tilde", &SynthesisPlan::delta_tilde)
        .def_readonly("delta_dist", &SynthesisPlan::delta_dist)
        .def_readonly("M", &SynthesisPlan::M)
        .def_readonly("M1", &SynthesisPlan::M1)
        .def_readonly("M2", &SynthesisPlan::M2)
        .def_readonly("hard_cap", &SynthesisPlan::hard_cap)
        .def_readonly("prod_range", &SynthesisPlan::prod_range)
        .def("calibrated_boundary_budget", &SynthesisPlan::calibrated_boundary_budget)
        .def("calibrated_source_budget", &SynthesisPlan::calibrated_source_budget)
        .def("calibrated_total_budget", &SynthesisPlan::calibrated_total_budget);

    py::class_<SynthesisConstants>(m, "SynthesisConstants").def(py::init<>());

    m.def("make_plan", &make_plan, py::arg("delta_bar"), py::arg("domain"), py::arg("norms"),
          py::arg("constants") = SynthesisConstants{}, py::arg("overrides") = PlanOverrides{});

    py::class_<RandomTableau>(m, "RandomTableau")
        .def_readonly("seed", &RandomTableau::seed)
        .def_readonly("M", &RandomTableau::M)
        .def_readonly("M1", &RandomTableau::M1)
        .def_readonly("M2", &RandomTableau::M2)
        .def_readonly("eps", &RandomTableau::eps)
        .def_readonly("caps1", &RandomTableau::caps1)
        .def_readonly("caps2", &RandomTableau::caps2)
        .def_readonly("any_capped", &RandomTableau::any_capped)
        .def("sum_caps1", &RandomTableau::sum_caps1)
        .def("sum_caps2", &RandomTableau::sum_caps2);

    m.def("freeze_tableau", &freeze_tableau, py::arg("plan"), py::arg("domain"), py::arg("seed"),
          py::arg("n_probes") = 16);
    m.def("save_tableau", &io::save_tableau);
    m.def("load_tableau", &io::load_tableau);

    m.def(
        "phi_u_eval",
        [](const RandomTableau& t, const std::optional<relu::ReluNet>& f_net,
           const relu::ReluNet& g_net, const relu::ReluNet& dist_net,
           const std::optional<relu::ReluNet>& product_net, const Vector& x) {
            return phi_u_eval(t, f_net ? &*f_net : nullptr, g_net, dist_net,
                              product_net ? &*product_net : nullptr, x);
        },
        py::arg("tableau"), py::arg("f_net"), py::arg("g_net"), py::arg("dist_net"),
        py::arg("product_net"), py::arg("x"));

    m.def(
        "flatten",
        [](const RandomTableau& t, const std::optional<relu::ReluNet>& f_net,
           const relu::ReluNet& g_net, const relu::ReluNet& dist_net,
           const std::optional<relu::ReluNet>& product_net, const SynthesisPlan& plan) {
            return flatten(t, f_net ? &*f_net : nullptr, g_net, dist_net,
                           product_net ? &*product_net : nullptr, plan);
        },
        py::arg("tableau"), py::arg("f_net"), py::arg("g_net"), py::arg("dist_net"),
        py::arg("product_net"), py::arg("plan"));

    m.def("l2_error", &l2_error, py::arg("approx"), py::arg("reference"), py::arg("domain"),
          py::arg("n_points"), py::arg("seed"), py::arg("threads") = 1,
          py::call_guard<py::gil_scoped_release>());

    py::class_<Problem>(m, "Problem")
        .def_readonly("name", &Problem::name)
        .def_readonly("has_source", &Problem::has_source)
        .def_readonly("g_affine", &Problem::g_affine)
        .def("u", [](const Problem& p, const Vector& x) { return p.u(x); })
        .def("f", [](const Problem& p, const Vector& x) { return p.f(x); })
        .def("g", [](const Problem& p, const Vector& x) { return p.g(x); })
        .def("norms", &Problem::norms)
        .def("f_surrogate", &Problem::f_surrogate)
        .def("g_surrogate", &Problem::g_surrogate);

    m.def("get_problem", &get_problem, py::arg("name"), py::arg("d"));
    m.def("problem_names", &problem_names);

    py::class_<CheckResult>(m, "CheckResult")
        .def_readonly("name", &CheckResult::name)
        .def_readonly("passed", &CheckResult::passed)
        .def_readonly("measured", &CheckResult::measured)
        .def_readonly("bound", &CheckResult::bound)
        .def_readonly("detail", &CheckResult::detail);

    m.def(
        "run_verification",
        [](const std::string& only, std::uint64_t seed, int threads, double sqrt_tolerance_scale) {
            VerifyOptions vo;
            vo.only = only;
            vo.seed = seed;
            vo.threads = threads;
            vo.sqrt_tolerance_scale = sqrt_tolerance_scale;
            return run_verification(vo);
        },
        py::arg("only") = "", py::arg("seed") = 1, py::arg("threads") = 1,
        py::arg("sqrt_tolerance_scale") = 1.0);
}
