#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pinn/autodiff.hpp"
#include "pinn/harness.hpp"
#include "pinn/lbfgs.hpp"
#include "pinn/loss.hpp"
#include "pinn/mechanics.hpp"
#include "pinn/problems.hpp"
#include "pinn/verify.hpp"

namespace py = pybind11;
using namespace pinn;

namespace {

std::unique_ptr<LossFunction> make_loss(const ProblemSpec& p, const std::string& kind,
                                        int threads) {
    if (kind == "collocation")
        return std::make_unique<CollocationLoss>(p.samples, p.material, p.body_force, threads);
    if (kind == "energy") return std::make_unique<EnergyLoss>(p.samples, p.material, threads);
    throw std::invalid_argument("unknown loss '" + kind + "'");
}

py::dict report_to_dict(const TrainReport& r) {
    py::dict d;
    d["problem"] = r.problem;
    d["loss"] = r.loss;
    d["seed"] = r.seed;
    d["hidden"] = r.hidden;
    d["iterations"] = r.iterations;
    d["function_evals"] = r.function_evals;
    d["converged_by"] = r.converged_by;
    d["final_loss"] = r.final_loss;
    d["term1"] = r.term1;
    d["term2"] = r.term2;
    d["train_seconds"] = r.train_seconds;
    d["rms"] = r.rms;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Physics-informed neural-network solver for linear elastostatics";

    py::class_<NetworkConfig>(m, "NetworkConfig")
        .def(py::init([](int n_input, int n_output, std::vector<int> hidden, std::uint64_t seed) {
                 NetworkConfig cfg;
                 cfg.n_input = n_input;
                 cfg.n_output = n_output;
                 cfg.hidden = std::move(hidden);
                 cfg.seed = seed;
                 return cfg;
             }),
             py::arg("n_input"), py::arg("n_output"), py::arg("hidden"), py::arg("seed") = 0)
        .def_readwrite("n_input", &NetworkConfig::n_input)
        .def_readwrite("n_output", &NetworkConfig::n_output)
        .def_readwrite("hidden", &NetworkConfig::hidden)
        .def_readwrite("seed", &NetworkConfig::seed);

    py::class_<Network>(m, "Network")
        .def_property_readonly("parameter_count", &Network::parameter_count)
        .def_property_readonly("config", &Network::config)
        .def("parameters", &Network::parameters)
        .def("set_parameters", &Network::set_parameters)
        .def("__call__", &Network::raw_forward, py::arg("x"));

    m.def("init_network", &init_network, py::arg("config"),
          "LeCun-normal initialized network (biases zero, deterministic per seed)");
    m.def("save_network", &save_network_file, py::arg("network"), py::arg("path"));
    m.def("load_network", &load_network_file, py::arg("path"));

    py::class_<NetworkSet>(m, "NetworkSet")
        .def_property_readonly("parameter_count", &NetworkSet::parameter_count)
        .def_property_readonly("dimension", &NetworkSet::dimension)
        .def_property_readonly("component_count", &NetworkSet::component_count)
        .def("parameters", &NetworkSet::parameters)
        .def("set_parameters", &NetworkSet::set_parameters)
        .def("displacement", &NetworkSet::displacement, py::arg("x"),
             "Displacement with the hard boundary transform applied");

    py::class_<PointDerivatives>(m, "PointDerivatives")
        .def_readonly("u", &PointDerivatives::u)
        .def_readonly("du", &PointDerivatives::du)
        .def_readonly("d2u", &PointDerivatives::d2u);

    m.def(
        "eval_with_input_derivatives",
        [](const NetworkSet& nets, const Eigen::VectorXd& x) {
            return eval_with_input_derivatives(nets, x);
        },
        py::arg("nets"), py::arg("x"),
        "Exact displacement, gradient and Hessian with respect to the input");

    py::class_<Material>(m, "Material")
        .def_readonly("E", &Material::E)
        .def_readonly("nu", &Material::nu)
        .def_readonly("lame_lambda", &Material::lambda)
        .def_readonly("mu", &Material::mu)
        .def_static("bar_1d", &Material::bar_1d, py::arg("E"))
        .def_static("plane_stress", &Material::plane_stress, py::arg("E"), py::arg("nu"))
        .def_static("solid_3d", &Material::solid_3d, py::arg("E"), py::arg("nu"));

    m.def("strain_from_gradient", &strain_from_gradient, py::arg("du"));
    m.def("stress_from_strain", &stress_from_strain, py::arg("eps"), py::arg("material"));
    m.def("traction", &traction, py::arg("sigma"), py::arg("normal"));

    py::class_<LossBreakdown>(m, "LossBreakdown")
        .def_readonly("total", &LossBreakdown::total)
        .def_readonly("governing", &LossBreakdown::governing)
        .def_readonly("traction", &LossBreakdown::traction)
        .def_readonly("internal_energy", &LossBreakdown::internal_energy)
        .def_readonly("external_work", &LossBreakdown::external_work);

    py::class_<ProblemSpec>(m, "Problem")
        .def_readonly("name", &ProblemSpec::name)
        .def_readonly("dimension", &ProblemSpec::dimension)
        .def_readonly("spacing", &ProblemSpec::spacing)
        .def_readonly("points_per_axis", &ProblemSpec::points_per_axis)
        .def_property_readonly(
            "interior", [](const ProblemSpec& p) { return p.samples.interior; })
        .def_property_readonly(
            "interior_weights", [](const ProblemSpec& p) { return p.samples.weights; })
        .def("networks",
             [](const ProblemSpec& p, std::uint64_t seed, const std::vector<int>& hidden,
                bool shared) { return make_networks(p, seed, hidden, shared); },
             py::arg("seed") = 0, py::arg("hidden") = std::vector<int>{},
             py::arg("shared") = false)
        .def("loss",
             [](const ProblemSpec& p, const std::string& kind, const NetworkSet& nets,
                int threads) { return make_loss(p, kind, threads)->evaluate(nets); },
             py::arg("kind"), py::arg("nets"), py::arg("threads") = 1)
        .def("loss_and_gradient",
             [](const ProblemSpec& p, const std::string& kind, const NetworkSet& nets,
                int threads) {
                 auto loss = make_loss(p, kind, threads);
                 Eigen::VectorXd grad(nets.parameter_count());
                 LossBreakdown b = loss->evaluate_with_gradient(nets, grad);
                 return py::make_tuple(b, grad);
             },
             py::arg("kind"), py::arg("nets"), py::arg("threads") = 1);

    m.def("make_problem", &make_problem, py::arg("name"));
    m.def("problem_names", &problem_names);
    m.def("rms_error", &rms_error, py::arg("truth"), py::arg("pred"));

    m.def(
        "minimize",
        [](const std::function<py::tuple(const Eigen::VectorXd&)>& fg, const Eigen::VectorXd& x0,
           int max_iterations, double grad_tol) {
            OptOptions opts;
            opts.max_iterations = max_iterations;
            opts.grad_tol = grad_tol;
            Objective obj = [&fg](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
                py::tuple out = fg(x);
                grad = out[1].cast<Eigen::VectorXd>();
                return out[0].cast<double>();
            };
            OptResult res = minimize(obj, x0, opts);
            py::dict d;
            d["x"] = res.x;
            d["final_loss"] = res.final_loss;
            d["iterations"] = res.iterations;
            d["converged_by"] = converged_by_name(res.converged_by);
            return d;
        },
        py::arg("fg"), py::arg("x0"), py::arg("max_iterations") = 5000,
        py::arg("grad_tol") = 1e-8,
        "L-BFGS with strong-Wolfe line search; fg(x) returns (loss, grad)");

    m.def(
        "solve",
        [](const std::string& problem, const std::string& loss, std::uint64_t seed,
           const std::vector<int>& hidden, int max_iterations, int threads,
           const std::string& out_dir, bool quiet) {
            RunConfig cfg;
            cfg.problem = problem;
            cfg.loss = loss;
            cfg.seed = seed;
            cfg.hidden = hidden;
            cfg.max_iterations = max_iterations;
            cfg.threads = threads;
            cfg.out_dir = out_dir;
            cfg.quiet = quiet;
            RunOutput out = run(cfg);
            py::dict d = report_to_dict(out.report);
            d["columns"] = out.fields.columns;
            d["fields"] = out.fields.values;
            return d;
        },
        py::arg("problem"), py::arg("loss"), py::arg("seed") = 0,
        py::arg("hidden") = std::vector<int>{}, py::arg("max_iterations") = 5000,
        py::arg("threads") = 1, py::arg("out_dir") = "out", py::arg("quiet") = true,
        "Train a benchmark end to end; writes fields.csv and report.json to out_dir");

    m.def(
        "verify",
        [](std::uint64_t seed, int draws) {
            py::list rows;
            for (const auto& c : run_verification_suite(seed, draws)) {
                py::dict d;
                d["name"] = c.name;
                d["pass"] = c.pass;
                d["worst"] = c.worst;
                d["limit"] = c.limit;
                rows.append(d);
            }
            return rows;
        },
        py::arg("seed") = 0xB10C5EEDULL, py::arg("draws") = 20,
        "Gradient-verification and oracle suites; one dict per check");
}
