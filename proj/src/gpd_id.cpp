#include <algorithm>
#include <map>

#include "ldtt/error.hpp"
#include "ldtt/gpd.hpp"

namespace ldtt::gpd {

using gf::Mat;

namespace {

std::size_t uz(int i) { return static_cast<std::size_t>(i); }

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::InvalidStructure, what); }

int position(const std::vector<int>& v, int x) {
    auto it = std::find(v.begin(), v.end(), x);
    if (it == v.end()) bad("element not in hom-set");
    return static_cast<int>(it - v.begin());
}

GpdPtr discrete_cached(std::map<int, GpdPtr>& cache, int n) {
    auto& g = cache[n];
    if (!g) g = discrete(n);
    return g;
}

// ⟨M, N⟩ : Γ → Γ.A.A
Functor pair_functor(const IdModel& m, const Section& M, const Section& N) {
    validate(m.a, M);
    validate(m.a, N);
    const auto& G = *m.a.base;
    Functor f{m.a.base, m.gaa.gpd, {}, {}};
    for (int c = 0; c < G.objects(); ++c) f.ob.push_back(m.gaa.object(m.ga.object(c, M.ob[uz(c)]), N.ob[uz(c)]));
    for (int u = 0; u < static_cast<int>(G.size()); ++u) {
        f.mor.push_back(m.gaa.morphism(m.ga.morphism(u, M.mor[uz(u)]), N.mor[uz(u)]));
    }
    validate(f);
    return f;
}

// Hom-set of A(γ) underlying the Id fiber over an object of Γ.A.A.
std::vector<int> id_hom(const IdModel& m, int o) {
    const auto [x, a2] = m.gaa.obj[uz(o)];
    const auto [c, a1] = m.ga.obj[uz(x)];
    return m.a.fibers[uz(c)]->hom(a1, a2);
}

std::uint64_t encode(const Mat& m) {
    std::uint64_t code = 0;
    std::uint64_t w = 1;
    for (auto e : m.entries()) {
        code += e * w;
        w *= m.prime();
    }
    return code;
}

}  // namespace

IdModel arrow_category(const GpdDiagram& a) {
    IdModel m;
    m.a = a;
    m.ga = grothendieck(a);
    m.a2 = precompose(m.ga.proj, a);
    m.gaa = grothendieck(m.a2);

    std::map<int, GpdPtr> cache;
    const auto& T = *m.gaa.gpd;
    m.id.base = m.gaa.gpd;
    for (int o = 0; o < T.objects(); ++o) m.id.fibers.push_back(discrete_cached(cache, static_cast<int>(id_hom(m, o).size())));
    for (int k = 0; k < static_cast<int>(T.size()); ++k) {
        // ((u, α), α') sends h : a → a' to α' ∘ A(u)(h) ∘ α⁻¹.
        const auto [i, al2] = m.gaa.mor[uz(k)];
        const auto [u, al] = m.ga.mor[uz(i)];
        const auto& fib = *m.a.fibers[uz(m.a.base->dst(u))];
        const auto& act = m.a.action[uz(u)];
        const auto src_hom = id_hom(m, T.src(k));
        const auto dst_hom = id_hom(m, T.dst(k));
        Functor f{m.id.fibers[uz(T.src(k))], m.id.fibers[uz(T.dst(k))], {}, {}};
        for (int h : src_hom) {
            const int moved = fib.comp(al2, fib.comp(act.mor[uz(h)], fib.inv(al)));
            f.ob.push_back(position(dst_hom, moved));
        }
        f.mor = f.ob;
        m.id.action.push_back(std::move(f));
    }
    m.gaai = grothendieck(m.id);

    const auto& GA = *m.ga.gpd;
    m.refl = Functor{m.ga.gpd, m.gaai.gpd, {}, {}};
    m.diag = Functor{m.ga.gpd, m.gaa.gpd, {}, {}};
    for (int x = 0; x < GA.objects(); ++x) {
        const auto [c, a1] = m.ga.obj[uz(x)];
        const int o = m.gaa.object(x, a1);
        m.diag.ob.push_back(o);
        m.refl.ob.push_back(m.gaai.object(o, position(id_hom(m, o), m.a.fibers[uz(c)]->id(a1))));
    }
    for (int i = 0; i < static_cast<int>(GA.size()); ++i) {
        const auto [u, al] = m.ga.mor[uz(i)];
        const int k = m.gaa.morphism(i, al);
        m.diag.mor.push_back(k);
        const int e = m.refl.ob[uz(GA.dst(i))];
        m.refl.mor.push_back(m.gaai.morphism(k, m.gaai.obj[uz(e)].second));
    }
    validate(m.refl);
    validate(m.diag);
    if (!(compose(m.gaai.proj, m.refl) == m.diag)) bad("refl does not lie over the diagonal");
    return m;
}

GpdDiagram id_over(const IdModel& m, const Section& M, const Section& N) {
    return precompose(pair_functor(m, M, N), m.id);
}

Functor mnp(const IdModel& m, const Section& M, const Section& N, const Section& P) {
    const Functor mn = pair_functor(m, M, N);
    validate(precompose(mn, m.id), P);
    Functor f{m.a.base, m.gaai.gpd, {}, {}};
    for (int c = 0; c < m.a.base->objects(); ++c) f.ob.push_back(m.gaai.object(mn.ob[uz(c)], P.ob[uz(c)]));
    for (int u = 0; u < static_cast<int>(m.a.base->size()); ++u) f.mor.push_back(m.gaai.morphism(mn.mor[uz(u)], P.mor[uz(u)]));
    validate(f);
    return f;
}

Functor refl_at(const IdModel& m, const Section& M) { return compose(m.refl, section_functor(m.ga, m.a, M)); }

Section refl_section(const IdModel& m, const Section& M) {
    const GpdDiagram d = id_over(m, M, M);
    Section s;
    for (int c = 0; c < m.a.base->objects(); ++c) {
        const int x = M.ob[uz(c)];
        s.ob.push_back(position(m.a.fibers[uz(c)]->hom(x, x), m.a.fibers[uz(c)]->id(x)));
    }
    for (int u = 0; u < static_cast<int>(m.a.base->size()); ++u) s.mor.push_back(d.fibers[uz(m.a.base->dst(u))]->id(s.ob[uz(m.a.base->dst(u))]));
    validate(d, s);
    return s;
}

std::vector<int> phi(const IdModel& m, const Section& M, const Section& N, const Section& P) {
    const Functor r = refl_at(m, M);
    const Functor t = mnp(m, M, N, P);
    const auto& G = *m.a.base;
    std::vector<int> out;
    for (int c = 0; c < G.objects(); ++c) {
        // Over id_γ: first component 1_M, second component P_γ.
        const auto& fib = *m.a.fibers[uz(c)];
        const int x = m.ga.morphism(G.id(c), fib.id(M.ob[uz(c)]));
        const int p = fib.hom(M.ob[uz(c)], N.ob[uz(c)])[uz(P.ob[uz(c)])];
        const int k = m.gaa.morphism(x, p);
        const int e = m.gaai.morphism(k, m.gaai.obj[uz(t.ob[uz(c)])].second);
        if (m.gaai.gpd->src(e) != r.ob[uz(c)] || m.gaai.gpd->dst(e) != t.ob[uz(c)]) bad("φ has the wrong endpoints");
        out.push_back(e);
    }
    return out;
}

bool phi_natural(const IdModel& m, const Section& M, const Section& N, const Section& P) {
    const Functor r = refl_at(m, M);
    const Functor t = mnp(m, M, N, P);
    const auto ph = phi(m, M, N, P);
    const auto& G = *m.a.base;
    const auto& T = *m.gaai.gpd;
    for (int u = 0; u < static_cast<int>(G.size()); ++u) {
        if (T.comp(t.mor[uz(u)], ph[uz(G.src(u))]) != T.comp(ph[uz(G.dst(u))], r.mor[uz(u)])) return false;
    }
    return true;
}

NatTrans c_hat(const IdModel& m, const VectDiagram& xi, const VectDiagram& c_diag, const std::vector<Mat>& c,
               const Section& M, const Section& N, const Section& P) {
    const Functor t = mnp(m, M, N, P);
    const auto ph = phi(m, M, N, P);
    NatTrans out{precompose(t, xi), precompose(t, c_diag), {}};
    for (int g = 0; g < m.a.base->objects(); ++g) {
        const int x = m.ga.object(g, M.ob[uz(g)]);
        const auto back = gf::inverse(xi.mats[uz(ph[uz(g)])]);
        if (!back) throw Error(ErrorKind::NotInvertibleComponent, "Ξ_φ not invertible");
        out.comps.push_back(gf::matmul(c_diag.mats[uz(ph[uz(g)])], gf::matmul(c[uz(x)], *back)));
    }
    return out;
}

NatTrans c_at(const IdModel& m, const VectDiagram& xi, const VectDiagram& c_diag, const std::vector<Mat>& c,
              const Section& M) {
    const Functor r = refl_at(m, M);
    NatTrans out{precompose(r, xi), precompose(r, c_diag), {}};
    for (int g = 0; g < m.a.base->objects(); ++g) out.comps.push_back(c[uz(m.ga.object(g, M.ob[uz(g)]))]);
    return out;
}

SignExample bz2_sign_example(int p) {
    const auto P = static_cast<gf::Residue>(p);
    const GpdPtr one = terminal();
    const GpdPtr z2 = cyclic(2);
    const IdModel m = arrow_category(constant(one, z2));
    const VectDiagram xi = constant(m.gaai.gpd, p, 1);

    // C on ((u, α), α') is sign(α) · sign(α'); on the image of r_A both signs agree.
    VectDiagram C{m.gaai.gpd, p, std::vector<int>(uz(m.gaai.gpd->objects()), 1), {}};
    const auto sign = [&](int g) { return g == z2->id(0) ? 1 : p - 1; };
    for (const auto& [k, e] : m.gaai.mor) {
        const auto [i, al2] = m.gaa.mor[uz(k)];
        const auto [u, al] = m.ga.mor[uz(i)];
        C.mats.push_back(Mat(1, 1, P, {static_cast<gf::Residue>(sign(al) * sign(al2) % p)}));
    }
    validate(C);
    const std::vector<Mat> c(uz(m.ga.gpd->objects()), gf::idmat(1, P));
    if (!is_natural(NatTrans{precompose(m.refl, xi), precompose(m.refl, C), c})) bad("sign example: c not natural");

    const Section M{{0}, {z2->id(0)}};
    const Section refl = refl_section(m, M);
    Section loop = refl;
    loop.ob[0] = position(z2->hom(0, 0), 1 - z2->id(0));
    loop.mor[0] = loop.ob[0];  // discrete fiber: the identity of an element has the same index
    SignExample out;
    out.c_refl = c_hat(m, xi, C, c, M, M, refl).comps[0];
    out.c_loop = c_hat(m, xi, C, c, M, M, loop).comps[0];
    out.c_m = c_at(m, xi, C, c, M).comps[0];
    return out;
}

// ---- Universe ---------------------------------------------------------------------------------

int Universe::lookup(const Mat& m) const {
    for (std::size_t i = 0; i < mats.size(); ++i) {
        if (mats[i].rows() == m.rows() && mats[i] == m) return static_cast<int>(i);
    }
    if (!gf::is_invertible(m)) throw Error(ErrorKind::NotInvertibleComponent, "matrix is not invertible");
    throw Error(ErrorKind::SizeOverflow, "matrix outside the truncated universe");
}

Universe linear_universe(int p, int cap) {
    if (!gf::is_prime(static_cast<std::uint32_t>(p))) throw Error(ErrorKind::Usage, "universe over a non-prime modulus");
    if (cap < 0) throw Error(ErrorKind::Usage, "negative universe cap");
    const auto P = static_cast<gf::Residue>(p);
    Universe u;
    u.p = p;
    u.cap = cap;
    std::vector<Arrow> arrows;
    for (int d = 0; d <= cap; ++d) {
        const auto n = gf::count_matrices(uz(d), uz(d), P);
        if (n > 100000) throw Error(ErrorKind::SizeOverflow, "universe too large");
        for (std::uint64_t code = 0; code < n; ++code) {
            Mat m = gf::decode_matrix(code, uz(d), uz(d), P);
            if (!gf::is_invertible(m)) continue;
            arrows.push_back({d, d});
            u.mats.push_back(std::move(m));
        }
    }
    u.core = std::make_shared<const FinGroupoid>(
        FinGroupoid::build(cap + 1, arrows, [&](int g, int f) { return u.lookup(gf::matmul(u.mats[uz(g)], u.mats[uz(f)])); }));
    return u;
}

UaSetting ua_setting(const GpdPtr& base, int p, int cap) {
    UaSetting s;
    s.u = linear_universe(p, cap);
    s.base = base;
    s.ids = arrow_category(constant(base, s.u.core));
    return s;
}

Section code_of(const UaSetting& s, const VectDiagram& el) {
    if (el.base.get() != s.base.get()) throw Error(ErrorKind::BaseMismatch, "El over another base");
    if (el.p != s.u.p) throw Error(ErrorKind::ModulusMismatch, "El over another field");
    validate(el);
    Section c;
    for (int d : el.dims) {
        if (d > s.u.cap) throw Error(ErrorKind::SizeOverflow, "dimension above the universe cap");
        c.ob.push_back(d);
    }
    for (const auto& m : el.mats) c.mor.push_back(s.u.lookup(m));
    validate(s.ids.a, c);
    return c;
}

VectDiagram el_of(const UaSetting& s, const Section& code) {
    validate(s.ids.a, code);
    VectDiagram d{s.base, s.u.p, code.ob, {}};
    for (int m : code.mor) d.mats.push_back(s.u.mats[uz(m)]);
    return d;
}

Section ua_forward(const UaSetting& s, const NatTrans& iso) {
    const Section A = code_of(s, iso.src);
    const Section B = code_of(s, iso.tgt);
    const GpdDiagram d = id_over(s.ids, A, B);
    Section path;
    for (int c = 0; c < s.base->objects(); ++c) {
        const auto& m = iso.comps[uz(c)];
        if (!gf::is_invertible(m)) throw Error(ErrorKind::NotInvertibleComponent, "component is not invertible");
        path.ob.push_back(position(s.u.core->hom(A.ob[uz(c)], B.ob[uz(c)]), s.u.lookup(m)));
    }
    for (int u = 0; u < static_cast<int>(s.base->size()); ++u) {
        const int t = s.base->dst(u);
        path.mor.push_back(d.fibers[uz(t)]->id(path.ob[uz(t)]));
    }
    // The section condition is exactly naturality of the components.
    validate(d, path);
    return path;
}

NatTrans ua_backward(const UaSetting& s, const VectDiagram& a, const VectDiagram& b, const Section& path) {
    const Section A = code_of(s, a);
    const Section B = code_of(s, b);
    validate(id_over(s.ids, A, B), path);
    NatTrans t{a, b, {}};
    for (int c = 0; c < s.base->objects(); ++c) {
        t.comps.push_back(s.u.mats[uz(s.u.core->hom(A.ob[uz(c)], B.ob[uz(c)])[uz(path.ob[uz(c)])])]);
    }
    return t;
}

UaReport ua_roundtrip(const UaSetting& s, const VectDiagram& a, const VectDiagram& b) {
    UaReport r;
    const Section A = code_of(s, a);
    const Section B = code_of(s, b);
    const auto sections = all_sections(id_over(s.ids, A, B));
    r.sections = sections.size();

    // Natural isos by exhaustive search over invertible components.
    std::vector<std::vector<Mat>> isos;
    const int n = s.base->objects();
    std::vector<std::vector<int>> choices(uz(n));
    for (int c = 0; c < n; ++c) choices[uz(c)] = s.u.core->hom(a.dims[uz(c)], b.dims[uz(c)]);
    std::vector<std::size_t> idx(uz(n), 0);
    bool any = std::all_of(choices.begin(), choices.end(), [](const auto& v) { return !v.empty(); });
    while (any) {
        std::vector<Mat> comps;
        for (int c = 0; c < n; ++c) comps.push_back(s.u.mats[uz(choices[uz(c)][idx[uz(c)]])]);
        if (is_natural(NatTrans{a, b, comps})) isos.push_back(std::move(comps));
        int c = n - 1;
        while (c >= 0 && ++idx[uz(c)] == choices[uz(c)].size()) idx[uz(c--)] = 0;
        if (c < 0) break;
    }
    r.isos = isos.size();

    bool ok = r.isos == r.sections;
    std::vector<Section> images;
    for (const auto& comps : isos) {
        const Section path = ua_forward(s, NatTrans{a, b, comps});
        if (ua_backward(s, a, b, path).comps != comps) ok = false;
        if (std::find(sections.begin(), sections.end(), path) == sections.end()) ok = false;
        if (std::find(images.begin(), images.end(), path) != images.end()) ok = false;
        images.push_back(path);
    }
    for (const auto& path : sections) {
        if (!(ua_forward(s, ua_backward(s, a, b, path)) == path)) ok = false;
    }
    r.roundtrip = ok;
    return r;
}

GpdDiagram m_endo(const VectDiagram& a) {
    validate(a);
    const auto P = static_cast<gf::Residue>(a.p);
    const auto& G = *a.base;
    GpdDiagram d{a.base, {}, {}};
    std::map<int, GpdPtr> cache;
    for (int c = 0; c < G.objects(); ++c) {
        const auto n = gf::count_matrices(uz(a.dims[uz(c)]), uz(a.dims[uz(c)]), P);
        if (n > 4096) throw Error(ErrorKind::SizeOverflow, "endomorphism set too large");
        d.fibers.push_back(discrete_cached(cache, static_cast<int>(n)));
    }
    for (int u = 0; u < static_cast<int>(G.size()); ++u) {
        const auto ds = uz(a.dims[uz(G.src(u))]);
        const Mat inv = *gf::inverse(a.mats[uz(u)]);
        Functor f{d.fibers[uz(G.src(u))], d.fibers[uz(G.dst(u))], {}, {}};
        for (int x = 0; x < d.fibers[uz(G.src(u))]->objects(); ++x) {
            const Mat X = gf::decode_matrix(static_cast<std::uint64_t>(x), ds, ds, P);
            const Mat Y = gf::matmul(a.mats[uz(u)], gf::matmul(X, inv));
            f.ob.push_back(static_cast<int>(encode(Y)));
        }
        f.mor = f.ob;
        d.action.push_back(std::move(f));
    }
    validate(d);
    return d;
}

Section sigma(const VectDiagram& a, const std::vector<Mat>& k) {
    if (!is_natural(NatTrans{a, a, k})) bad("σ of a non-natural family");
    const GpdDiagram d = m_endo(a);
    Section s;
    for (const auto& m : k) s.ob.push_back(static_cast<int>(encode(m)));
    for (int u = 0; u < static_cast<int>(a.base->size()); ++u) {
        const int t = a.base->dst(u);
        s.mor.push_back(d.fibers[uz(t)]->id(s.ob[uz(t)]));
    }
    validate(d, s);
    return s;
}

NatTrans ua_discharge(const VectDiagram& a, const VectDiagram& b, const NatTrans& f, const NatTrans& g,
                      const NatTrans& h, const Section& p, const Section& q) {
    if (!is_natural(f) || !is_natural(g) || !is_natural(h)) bad("premise is not a natural transformation");
    const auto P = static_cast<gf::Residue>(a.p);
    // For an identity between σ(k) and σ(id) in a discrete groupoid, read off k = id pointwise.
    const auto force = [&](const VectDiagram& x, const NatTrans& k, const Section& path) {
        const GpdDiagram endo = m_endo(x);
        const IdModel ids = arrow_category(endo);
        const Section lhs = sigma(x, k.comps);
        const Section rhs = sigma(x, identity(x).comps);
        validate(id_over(ids, lhs, rhs), path);
        for (int c = 0; c < x.base->objects(); ++c) {
            const auto& fib = *endo.fibers[uz(c)];
            if (!fib.discrete()) bad("endomorphism groupoid is not discrete");
            const int m = fib.hom(lhs.ob[uz(c)], rhs.ob[uz(c)])[uz(path.ob[uz(c)])];
            if (fib.src(m) != fib.dst(m)) bad("morphism of a discrete groupoid between distinct objects");
            const auto d = uz(x.dims[uz(c)]);
            if (!(gf::decode_matrix(static_cast<std::uint64_t>(fib.src(m)), d, d, P) == k.comps[uz(c)])) {
                bad("discreteness did not force the identity");
            }
        }
    };
    force(a, vcompose(g, f), p);
    force(b, vcompose(f, h), q);
    // g f = id and f h = id, so g = g f h = h and f is a natural isomorphism with inverse g.
    NatTrans iso{a, b, f.comps};
    for (int c = 0; c < a.base->objects(); ++c) {
        if (!(gf::matmul(f.comps[uz(c)], g.comps[uz(c)]) == gf::idmat(uz(b.dims[uz(c)]), P))) bad("inverse mismatch");
    }
    return iso;
}

}  // namespace ldtt::gpd
