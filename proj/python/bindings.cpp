#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "moddeg2/arith.hpp"
#include "moddeg2/classify.hpp"
#include "moddeg2/cubicfield.hpp"
#include "moddeg2/curve.hpp"
#include "moddeg2/hecke2.hpp"
#include "moddeg2/modsym.hpp"

namespace py = pybind11;
using namespace moddeg2;

namespace {

py::object big(const curve::Int& x) {
    return py::module_::import("builtins").attr("int")(x.str());
}

curve::WeierstrassCurve curve_of(const std::vector<std::int64_t>& a) {
    if (a.size() != 5) throw std::invalid_argument("expected five a-invariants");
    return curve::derive_invariants({a[0], a[1], a[2], a[3], a[4]});
}

py::dict curve_info(const std::vector<std::int64_t>& a) {
    auto E = curve_of(a);
    py::dict d;
    d["disc"] = big(E.disc);
    d["c4"] = big(E.c4);
    d["c6"] = big(E.c6);
    d["j_num"] = big(E.j_num);
    d["j_den"] = big(E.j_den);
    d["has_two_torsion"] = curve::two_torsion_info(E).has_rational_root;
    d["real_connected"] = curve::is_real_connected(E);
    if (E.disc % 2 != 0) d["supersingular_at_2"] = curve::is_supersingular_at_2(E);
    auto cm = curve::cm_discriminant(E);
    if (cm) d["cm_discriminant"] = *cm;
    return d;
}

py::dict space_info(std::int64_t N) {
    auto sp = modsym::build_space(N);
    py::dict d;
    d["level"] = N;
    d["genus"] = sp.genus();
    d["cuspidal_dim"] = sp.cuspidal_dim();
    d["cusps"] = sp.cusp_count();
    d["sturm"] = sp.sturm_bound();
    return d;
}

py::list local_factors(std::int64_t N) {
    auto sp = modsym::build_space(N);
    auto L = hecke2::hecke_lattice(sp);
    auto facs = hecke2::decompose_mod2(L);
    py::list out;
    for (auto& f : facs) {
        py::dict d;
        d["d_m"] = f.d_m;
        d["residue_degree"] = f.residue_degree;
        d["eisenstein"] = f.eisenstein;
        d["tm_equals_z2"] = hecke2::tm_equals_z2(f);
        py::dict eig;
        for (auto& [ell, val] : f.prime_images) {
            if (ell > 30) break;
            eig[py::int_(ell)] =
                val.in_f2 ? py::object(py::int_(val.f2_value ? 1 : 0)) : py::object(py::str(val.minpoly.to_string()));
        }
        d["eigensystem"] = eig;
        out.append(d);
    }
    return out;
}

py::dict parity(std::int64_t N, const std::vector<std::int64_t>& a) {
    auto E = curve_of(a);
    auto pc = classify::predict_parity_prime_level(E, N);
    py::dict d;
    d["parity"] = classify::parity_name(pc.verdict.parity);
    d["rule"] = classify::rule_name(pc.verdict.rule);
    d["d_m"] = pc.d_m;
    d["residue_degree"] = pc.residue_degree;
    d["eisenstein"] = pc.eisenstein;
    return d;
}

py::dict filter_verdict(const std::vector<std::int64_t>& a, std::uint64_t N) {
    auto E = curve_of(a);
    auto v = classify::theorem_one_filter(E, arith::factor(N));
    py::dict d;
    d["parity"] = classify::parity_name(v.parity);
    d["rule"] = classify::rule_name(v.rule);
    d["rule_violated"] = v.rule_violated;
    d["citations"] = v.citations;
    return d;
}

std::string rank_parity(std::int64_t N, const std::vector<std::int64_t>& a) {
    auto E = curve_of(a);
    auto sp = modsym::build_space(N);
    auto line = modsym::locate_eigenform(
        sp, [&](std::int64_t ell) { return curve::ap_point_count(E, static_cast<std::uint64_t>(ell)); });
    return modsym::analytic_rank_parity(sp, line) == modsym::RankParity::Even ? "even" : "odd";
}

py::dict two_division_field_info(const std::vector<std::int64_t>& a) {
    auto E = curve_of(a);
    auto K = cubicfield::two_division_field(E);
    py::dict d;
    d["poly_disc"] = big(K.poly_disc);
    d["field_disc"] = big(K.field_disc);
    d["index"] = big(K.index);
    d["signature"] = py::make_tuple(K.signature.first, K.signature.second);
    d["two_totally_ramified"] = cubicfield::split_prime(K, 2).totally_ramified();
    return d;
}

} // namespace

PYBIND11_MODULE(_moddeg2, m) {
    m.doc() = "modular degree parity via mod-2 Hecke algebras";

    m.def("is_prime", [](std::uint64_t n) { return arith::is_prime(n); });
    m.def("factor", [](std::uint64_t n) {
        py::list out;
        for (auto& [p, e] : arith::factor(n).factors) out.append(py::make_tuple(p, e));
        return out;
    });
    m.def("represent_u2_plus_16v2", [](std::uint64_t N) {
        auto r = arith::represent_u2_plus_16v2(N);
        return py::make_tuple(r.u, r.v);
    });
    m.def("merel_criterion", [](std::uint64_t N) { return arith::merel_criterion(N); });
    m.def("neumann_setzer_test", [](std::uint64_t N) -> py::object {
        auto r = arith::neumann_setzer_test(N);
        if (!r) return py::none();
        return py::make_tuple(r->u, r->odd_degree);
    });
    m.def("ap", [](const std::vector<std::int64_t>& a, std::uint64_t p) {
        return curve::ap_point_count(curve_of(a), p);
    });
    m.def("curve_info", &curve_info);
    m.def("space_info", &space_info);
    m.def("genus_x0", [](std::int64_t N) { return modsym::genus_x0(N); });
    m.def("local_factors", &local_factors);
    m.def("parity", &parity);
    m.def("theorem_one_filter", &filter_verdict);
    m.def("rank_parity", &rank_parity);
    m.def("two_division_field", &two_division_field_info);
}
