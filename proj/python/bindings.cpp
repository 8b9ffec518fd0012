#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "adkg/checks.hpp"

namespace py = pybind11;
using namespace adkg;

namespace {

py::object parse_json(const std::string& text) { return py::module_::import("json").attr("loads")(text); }

std::string dump_json(const py::object& obj) {
  if (py::isinstance<py::str>(obj)) return obj.cast<std::string>();
  return py::module_::import("json").attr("dumps")(obj).cast<std::string>();
}

Words to_words(const std::vector<std::uint64_t>& v) {
  Words out;
  out.reserve(v.size());
  for (auto x : v) out.push_back(field::FieldElem::from(x));
  return out;
}

std::vector<std::uint64_t> from_words(std::span<const field::FieldElem> w) {
  std::vector<std::uint64_t> out;
  out.reserve(w.size());
  for (auto x : w) out.push_back(x.value());
  return out;
}

Bytes to_bytes_py(const py::bytes& b) {
  const std::string s = b;
  return Bytes(s.begin(), s.end());
}

py::bytes digest_bytes(const Digest& d) { return py::bytes(reinterpret_cast<const char*>(d.data()), d.size()); }

Digest to_digest(const py::bytes& b) {
  const std::string s = b;
  Digest d{};
  if (s.size() != d.size()) throw Error(ErrorCode::Config, "digest must be 32 bytes");
  std::copy(s.begin(), s.end(), d.begin());
  return d;
}

sim::ScenarioConfig config_of(const py::object& cfg) { return sim::ScenarioConfig::from_json(dump_json(cfg)); }

}  // namespace

PYBIND11_MODULE(_adkg, m) {
  m.doc() = "Asynchronous key generation simulator";

  py::register_exception<Error>(m, "AdkgError", PyExc_ValueError);
  m.attr("MODULUS") = field::kModulus;

  m.def("chunk_size", &field::chunk_size, py::arg("msg_len"), py::arg("f"));
  m.def(
      "encode_chunks",
      [](const std::vector<std::uint64_t>& msg, std::size_t n, std::size_t f) {
        std::vector<std::vector<std::uint64_t>> out;
        for (const auto& c : field::encode_chunks(to_words(msg), n, f)) out.push_back(from_words(c));
        return out;
      },
      py::arg("msg"), py::arg("n"), py::arg("f"));
  m.def(
      "interpolate",
      [](const std::vector<std::pair<std::uint64_t, std::uint64_t>>& pts, std::size_t degree_bound) {
        std::vector<field::Point> p;
        for (auto [x, y] : pts) p.emplace_back(field::FieldElem::from(x), field::FieldElem::from(y));
        return from_words(field::interpolate(p, degree_bound).coeffs_padded(degree_bound + 1));
      },
      py::arg("points"), py::arg("degree_bound"));
  m.def(
      "encode_bytes", [](const py::bytes& b) { return from_words(field::encode_bytes(to_bytes_py(b))); },
      py::arg("data"));
  m.def(
      "decode_bytes",
      [](const std::vector<std::uint64_t>& w) -> std::optional<py::bytes> {
        auto b = field::decode_bytes(to_words(w));
        if (!b) return std::nullopt;
        return py::bytes(reinterpret_cast<const char*>(b->data()), b->size());
      },
      py::arg("words"));

  m.def(
      "vc_commit",
      [](const std::vector<py::bytes>& values) {
        std::vector<Bytes> v;
        for (const auto& x : values) v.push_back(to_bytes_py(x));
        return digest_bytes(vc::commit(v).root);
      },
      py::arg("values"));
  m.def(
      "vc_open_prove",
      [](const std::vector<py::bytes>& values, std::size_t position) {
        std::vector<Bytes> v;
        for (const auto& x : values) v.push_back(to_bytes_py(x));
        std::vector<py::bytes> out;
        for (const auto& d : vc::open_prove(v, position).siblings) out.push_back(digest_bytes(d));
        return out;
      },
      py::arg("values"), py::arg("position"));
  m.def(
      "vc_open_verify",
      [](const py::bytes& root, std::uint32_t length, const py::bytes& value, std::size_t position,
         const std::vector<py::bytes>& siblings) {
        vc::VectorCommitment c{to_digest(root), length};
        vc::OpeningProof p;
        for (const auto& s : siblings) p.siblings.push_back(to_digest(s));
        return vc::open_verify(c, to_bytes_py(value), position, p);
      },
      py::arg("root"), py::arg("length"), py::arg("value"), py::arg("position"), py::arg("siblings"));

  m.def("behavior_names", &sim::behavior_names);
  m.def(
      "reference_config",
      [](const std::string& protocol) { return parse_json(sim::reference_config(sim::parse_protocol(protocol)).to_json()); },
      py::arg("protocol"));
  m.def(
      "run_scenario",
      [](const py::object& cfg, std::uint64_t seed, bool trace) {
        auto c = config_of(cfg);
        c.check();
        auto o = sim::run_scenario(c, seed, trace);
        py::dict out = parse_json(o.to_json());
        if (trace) out["trace"] = o.trace;
        return out;
      },
      py::arg("config"), py::arg("seed") = 0, py::arg("trace") = false);
  m.def(
      "sweep",
      [](const py::object& cfg) {
        auto c = config_of(cfg);
        c.check();
        std::vector<sim::RunOutcome> runs;
        for (auto s = c.seed_begin; s <= c.seed_end; ++s) runs.push_back(sim::run_scenario(c, s));
        return parse_json(sim::summarize(to_string(c.protocol), runs).to_json());
      },
      py::arg("config"));
  m.def(
      "scaling",
      [](const py::object& cfg, const std::vector<std::size_t>& ns) {
        return parse_json(sim::scaling(config_of(cfg), ns).to_json());
      },
      py::arg("config"), py::arg("ns"));
  m.def(
      "replay_trace",
      [](const std::string& trace) {
        std::istringstream in(trace);
        auto t = sim::replay_trace(in);
        py::dict out;
        out["words_total"] = t.words_total;
        out["words_by_protocol"] = t.words_by_protocol;
        out["sends"] = t.sends;
        return out;
      },
      py::arg("trace"));
}
