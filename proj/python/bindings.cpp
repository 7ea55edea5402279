#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "arat/cli.hpp"
#include "arat/error.hpp"
#include "arat/homotopy.hpp"
#include "arat/io.hpp"
#include "arat/oracle.hpp"
#include "arat/tracer.hpp"
#include "arat/vlcp.hpp"

namespace py = pybind11;
using namespace arat;

namespace {

TracerConfig config_from(const py::dict& kw) {
  TracerConfig c;
  for (auto item : kw) {
    const auto key = item.first.cast<std::string>();
    if (key == "eps1") c.eps1 = item.second.cast<double>();
    else if (key == "eps2") c.eps2 = item.second.cast<double>();
    else if (key == "eps3") c.eps3 = item.second.cast<double>();
    else if (key == "l0") c.l0 = item.second.cast<double>();
    else if (key == "m") c.m = item.second.cast<int>();
    else if (key == "a0") c.a0 = item.second.cast<double>();
    else if (key == "r_accept") c.r_accept = item.second.cast<double>();
    else if (key == "max_steps") c.max_steps = item.second.cast<std::size_t>();
    else if (key == "full_gate") {
      c.gate = item.second.cast<bool>() ? PositivityGate::kFull
                                        : PositivityGate::kPrimal;
    } else {
      throw py::key_error("unknown tracer option: " + key);
    }
  }
  return c;
}

}  // namespace

PYBIND11_MODULE(_arat, m) {
  m.doc() = "Homotopy solver for discounted zero-sum ARAT stochastic games";

  py::register_exception<Error>(m, "AratError", PyExc_RuntimeError);

  py::class_<AratGame>(m, "Game")
      .def_readwrite("beta", &AratGame::beta)
      .def_readonly("r1", &AratGame::r1)
      .def_readonly("r2", &AratGame::r2)
      .def_readonly("p1", &AratGame::p1)
      .def_readonly("p2", &AratGame::p2)
      .def_property_readonly("num_states", &AratGame::num_states)
      .def("to_json", [](const AratGame& g) { return game_to_json(g); })
      .def("__eq__", &AratGame::operator==);

  m.def("parse_game", &parse_game_json, py::arg("text"));
  m.def("load_game", &load_game, py::arg("path"));
  m.def("validate", [](const AratGame& g) { return validate(g).violations; });
  m.def("shift_rewards", &shift_rewards);

  m.def("build", [](const AratGame& g) { return build_json(g).dump(); },
        "construction matrices as a JSON string");
  m.def("equivalent_lcp", [](const AratGame& g) {
    const SquareLcp lcp = to_equivalent_lcp(build_vlcp(g));
    return py::make_tuple(lcp.m, lcp.q);
  });
  m.def("oracle", [](const AratGame& g) { return oracle_json(g).dump(); });
  m.def("enumerate_lcp", [](const Matrix& mm, const Vector& q) {
    std::vector<std::pair<Vector, Vector>> out;
    for (const LcpPair& p : enumerate_lcp(mm, q)) out.emplace_back(p.z, p.w);
    return out;
  });

  py::class_<HomotopyInstance>(m, "Homotopy")
      .def(py::init<Matrix, Vector, Vector>(), py::arg("a"), py::arg("q"),
           py::arg("x0"))
      .def("eval", [](const HomotopyInstance& h, const Vector& u, double t) {
        return h.eval({u, t});
      })
      .def("jac_full", [](const HomotopyInstance& h, const Vector& u, double t) {
        return h.jac_full({u, t});
      })
      .def("start", [](const HomotopyInstance& h) { return h.start().u; })
      .def("trace", [](const HomotopyInstance& h, const py::kwargs& kw) {
        const TraceResult r = trace(h, config_from(kw));
        std::vector<double> ts;
        for (const PathPoint& p : r.path) ts.push_back(p.point.t);
        py::dict d;
        d["status"] = std::string(to_string(r.status));
        d["t"] = ts;
        d["u"] = r.final.u;
        d["final_t"] = r.final.t;
        return d;
      });

  m.def("interior_point", [](const AratGame& g) {
    InteriorPointOptions opt;
    opt.beta = g.beta;
    return find_interior_point(to_equivalent_lcp(build_vlcp(g)), opt);
  });
  m.def("interior_point", [](const Matrix& mm, const Vector& q) {
    return find_interior_point(SquareLcp::plain(mm, q));
  });

  m.def(
      "solve",
      [](const AratGame& g, std::optional<Vector> x0, bool shift,
         std::size_t restarts, const py::kwargs& kw) {
        SolveOptions opt;
        opt.x0_hint = std::move(x0);
        opt.shift_rewards = shift;
        opt.restarts = restarts;
        opt.tracer = config_from(kw);
        return report_json(solve_game(g, opt)).dump();
      },
      py::arg("game"), py::arg("x0") = py::none(),
      py::arg("shift_rewards") = false, py::arg("restarts") = 3,
      "pipeline report as a JSON string");
}
