#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "normhol/cli.hpp"

namespace py = pybind11;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bindings for the normhol library: JSON in, JSON out.";
  auto input_error = py::register_exception<normhol::InvalidInput>(m, "InputError", PyExc_ValueError);
  py::register_exception<normhol::InternalError>(m, "InternalError", PyExc_RuntimeError);
  (void)input_error;

  m.attr("SUBCOMMANDS") = normhol::cli::kSubcommands;
  m.attr("DEFAULT_SEED") = normhol::kDefaultSeed;

  m.def(
      "execute",
      [](const std::string& subcommand, const std::string& input, const std::string& mode,
         double tol, std::uint64_t seed) {
        nlohmann::json parsed;
        try {
          parsed = nlohmann::json::parse(input);
        } catch (const nlohmann::json::parse_error& e) {
          throw normhol::InvalidInput(std::string("malformed JSON: ") + e.what());
        }
        nlohmann::json report;
        {
          py::gil_scoped_release release;
          report = normhol::cli::execute(subcommand, parsed, mode, tol, seed);
        }
        return report.dump();
      },
      py::arg("subcommand"), py::arg("input"), py::arg("mode") = "", py::arg("tol") = 1e-9,
      py::arg("seed") = normhol::kDefaultSeed,
      "Runs one subcommand on a JSON document and returns the JSON report.");

  m.def(
      "main",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = normhol::cli::run(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Command-line entry point; returns (exit code, stdout, stderr).");
}
