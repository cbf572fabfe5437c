#include "ldtt/gpd.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

#include <json.hpp>

#include "ldtt/error.hpp"

namespace ldtt::gpd {

using gf::Mat;

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::InvalidStructure, what); }

std::size_t uz(int i) { return static_cast<std::size_t>(i); }

}  // namespace

// ---- FinGroupoid ------------------------------------------------------------------------------

void FinGroupoid::index() {
    out_.assign(uz(objects_), {});
    pos_.assign(mors_.size(), 0);
    for (std::size_t m = 0; m < mors_.size(); ++m) {
        const auto& a = mors_[m];
        if (a.src < 0 || a.src >= objects_ || a.dst < 0 || a.dst >= objects_) bad("morphism endpoint out of range");
        pos_[m] = out_[uz(a.src)].size();
        out_[uz(a.src)].push_back(static_cast<int>(m));
    }
    base_.assign(mors_.size(), 0);
    std::size_t off = 0;
    for (std::size_t f = 0; f < mors_.size(); ++f) {
        base_[f] = off;
        off += out_[uz(mors_[f].dst)].size();
    }
    table_.assign(off, -1);
}

int FinGroupoid::comp(int g, int f) const {
    if (dst(f) != src(g)) bad("composing non-composable morphisms");
    return table_[base_[uz(f)] + pos_[uz(g)]];
}

std::vector<int> FinGroupoid::hom(int a, int b) const {
    std::vector<int> r;
    for (int m : out(a)) {
        if (dst(m) == b) r.push_back(m);
    }
    return r;
}

void FinGroupoid::audit() const {
    const int n = static_cast<int>(mors_.size());
    for (int f = 0; f < n; ++f) {
        for (int g : out(dst(f))) {
            const int gf = comp(g, f);
            if (gf < 0 || gf >= n) bad("composition table not closed");
            if (src(gf) != src(f) || dst(gf) != dst(g)) bad("composite has wrong endpoints");
        }
    }
    for (int o = 0; o < objects_; ++o) {
        if (ident_[uz(o)] < 0) bad("object without identity");
    }
    for (int f = 0; f < n; ++f) {
        if (comp(id(dst(f)), f) != f || comp(f, id(src(f))) != f) bad("unit law fails");
        const int i = inv_[uz(f)];
        if (i < 0 || comp(i, f) != id(src(f)) || comp(f, i) != id(dst(f))) bad("morphism without inverse");
        for (int g : out(dst(f))) {
            const int gf = comp(g, f);
            for (int h : out(dst(g))) {
                if (comp(h, gf) != comp(comp(h, g), f)) bad("composition not associative");
            }
        }
    }
}

GpdPtr terminal() { return discrete(1); }

GpdPtr discrete(int n) {
    std::vector<Arrow> m;
    for (int i = 0; i < n; ++i) m.push_back({i, i});
    return std::make_shared<const FinGroupoid>(FinGroupoid::build(n, m, [](int, int f) { return f; }));
}

GpdPtr codiscrete(int n) {
    std::vector<Arrow> m;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) m.push_back({i, j});
    }
    return std::make_shared<const FinGroupoid>(FinGroupoid::build(n, m, [&](int g, int f) {
        return m[uz(f)].src * n + m[uz(g)].dst;
    }));
}

GpdPtr group(int order, const std::vector<int>& mult) {
    if (order <= 0 || mult.size() != uz(order) * uz(order)) bad("group table has the wrong size");
    std::vector<Arrow> m(uz(order), Arrow{0, 0});
    return std::make_shared<const FinGroupoid>(
        FinGroupoid::build(1, m, [&](int g, int f) { return mult[uz(g) * uz(order) + uz(f)]; }));
}

GpdPtr cyclic(int n) {
    std::vector<int> t;
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) t.push_back((a + b) % n);
    }
    return group(n, t);
}

GpdPtr klein() {
    std::vector<int> t;
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) t.push_back(a ^ b);
    }
    return group(4, t);
}

GpdPtr s3() {
    std::vector<std::array<int, 3>> perms;
    std::array<int, 3> p{0, 1, 2};
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    std::vector<int> t;
    for (const auto& g : perms) {
        for (const auto& f : perms) {
            const std::array<int, 3> gf{g[uz(f[0])], g[uz(f[1])], g[uz(f[2])]};
            t.push_back(static_cast<int>(std::find(perms.begin(), perms.end(), gf) - perms.begin()));
        }
    }
    return group(6, t);
}

GpdPtr product(const GpdPtr& a, const GpdPtr& b) {
    const int nb = b->objects();
    const int mb = static_cast<int>(b->size());
    std::vector<Arrow> m;
    for (int x = 0; x < static_cast<int>(a->size()); ++x) {
        for (int y = 0; y < mb; ++y) m.push_back({a->src(x) * nb + b->src(y), a->dst(x) * nb + b->dst(y)});
    }
    return std::make_shared<const FinGroupoid>(FinGroupoid::build(a->objects() * nb, m, [&](int g, int f) {
        return a->comp(g / mb, f / mb) * mb + b->comp(g % mb, f % mb);
    }));
}

GpdPtr coproduct(const GpdPtr& a, const GpdPtr& b) {
    const int na = a->objects();
    const int ma = static_cast<int>(a->size());
    std::vector<Arrow> m;
    for (int x = 0; x < ma; ++x) m.push_back(a->arrow(x));
    for (int y = 0; y < static_cast<int>(b->size()); ++y) m.push_back({b->src(y) + na, b->dst(y) + na});
    return std::make_shared<const FinGroupoid>(FinGroupoid::build(na + b->objects(), m, [&](int g, int f) {
        return f < ma ? a->comp(g, f) : b->comp(g - ma, f - ma) + ma;
    }));
}

GpdPtr groupoid_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Usage, std::string("groupoid file: ") + e.what());
    }
    try {
        const int n = j.at("objects").get<int>();
        std::vector<Arrow> m;
        for (const auto& a : j.at("morphisms")) m.push_back({a.at(0).get<int>(), a.at(1).get<int>()});
        std::map<std::pair<int, int>, int> tab;
        for (const auto& c : j.at("comp")) tab[{c.at(0).get<int>(), c.at(1).get<int>()}] = c.at(2).get<int>();
        auto g = FinGroupoid::build(n, m, [&](int x, int y) {
            auto it = tab.find({x, y});
            return it == tab.end() ? -1 : it->second;
        });
        if (j.contains("labels")) g.labels = j["labels"].get<std::vector<std::string>>();
        return std::make_shared<const FinGroupoid>(std::move(g));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Usage, std::string("groupoid file: ") + e.what());
    }
}

// ---- Functors -----------------------------------------------------------------------------------

void validate(const Functor& f) {
    const auto& a = *f.src;
    const auto& b = *f.dst;
    if (f.ob.size() != uz(a.objects()) || f.mor.size() != a.size()) bad("functor tables have the wrong size");
    for (int o : f.ob) {
        if (o < 0 || o >= b.objects()) bad("functor object out of range");
    }
    for (std::size_t m = 0; m < a.size(); ++m) {
        const int x = f.mor[m];
        if (x < 0 || uz(x) >= b.size()) bad("functor morphism out of range");
        if (b.src(x) != f.ob[uz(a.src(static_cast<int>(m)))] || b.dst(x) != f.ob[uz(a.dst(static_cast<int>(m)))]) {
            bad("functor does not respect endpoints");
        }
    }
    for (int o = 0; o < a.objects(); ++o) {
        if (f.mor[uz(a.id(o))] != b.id(f.ob[uz(o)])) bad("functor does not preserve identities");
    }
    for (int x = 0; x < static_cast<int>(a.size()); ++x) {
        for (int g : a.out(a.dst(x))) {
            if (f.mor[uz(a.comp(g, x))] != b.comp(f.mor[uz(g)], f.mor[uz(x)])) bad("functor does not preserve composites");
        }
    }
}

Functor identity(const GpdPtr& g) {
    Functor f{g, g, {}, {}};
    f.ob.resize(uz(g->objects()));
    std::iota(f.ob.begin(), f.ob.end(), 0);
    f.mor.resize(g->size());
    std::iota(f.mor.begin(), f.mor.end(), 0);
    return f;
}

Functor compose(const Functor& g, const Functor& f) {
    if (g.src.get() != f.dst.get()) throw Error(ErrorKind::BaseMismatch, "functor composite: codomain differs from domain");
    Functor h{f.src, g.dst, {}, {}};
    for (int o : f.ob) h.ob.push_back(g.ob[uz(o)]);
    for (int m : f.mor) h.mor.push_back(g.mor[uz(m)]);
    return h;
}

Functor to_terminal(const GpdPtr& g) {
    static const GpdPtr one = terminal();
    return Functor{g, one, std::vector<int>(uz(g->objects()), 0), std::vector<int>(g->size(), 0)};
}

// ---- Diagrams -----------------------------------------------------------------------------------

void validate(const GpdDiagram& d) {
    const auto& g = *d.base;
    if (d.fibers.size() != uz(g.objects()) || d.action.size() != g.size()) bad("diagram tables have the wrong size");
    for (std::size_t u = 0; u < g.size(); ++u) {
        const auto& a = d.action[u];
        if (a.src.get() != d.fibers[uz(g.src(static_cast<int>(u)))].get() ||
            a.dst.get() != d.fibers[uz(g.dst(static_cast<int>(u)))].get()) {
            bad("diagram action between the wrong fibers");
        }
        validate(a);
    }
    for (int o = 0; o < g.objects(); ++o) {
        if (!(d.action[uz(g.id(o))] == identity(d.fibers[uz(o)]))) bad("diagram does not preserve identities");
    }
    for (int f = 0; f < static_cast<int>(g.size()); ++f) {
        for (int h : g.out(g.dst(f))) {
            if (!(d.action[uz(g.comp(h, f))] == compose(d.action[uz(h)], d.action[uz(f)]))) {
                bad("diagram does not preserve composites");
            }
        }
    }
}

void validate(const VectDiagram& d) {
    const auto& g = *d.base;
    if (d.dims.size() != uz(g.objects()) || d.mats.size() != g.size()) bad("diagram tables have the wrong size");
    const auto P = static_cast<gf::Residue>(d.p);
    for (int u = 0; u < static_cast<int>(g.size()); ++u) {
        const auto& m = d.mats[uz(u)];
        if (m.rows() != uz(d.dims[uz(g.dst(u))]) || m.cols() != uz(d.dims[uz(g.src(u))])) {
            throw Error(ErrorKind::DimMismatch, "diagram matrix has the wrong shape");
        }
        if (m.prime() != P) throw Error(ErrorKind::ModulusMismatch, "diagram matrix over the wrong field");
        if (!gf::is_invertible(m)) bad("diagram matrix not invertible");
    }
    for (int o = 0; o < g.objects(); ++o) {
        if (!(d.mats[uz(g.id(o))] == gf::idmat(uz(d.dims[uz(o)]), P))) bad("diagram does not preserve identities");
    }
    for (int f = 0; f < static_cast<int>(g.size()); ++f) {
        for (int h : g.out(g.dst(f))) {
            if (!(d.mats[uz(g.comp(h, f))] == gf::matmul(d.mats[uz(h)], d.mats[uz(f)]))) {
                bad("diagram does not preserve composites");
            }
        }
    }
}

bool is_natural(const NatTrans& t) {
    const auto& g = *t.src.base;
    if (t.comps.size() != uz(g.objects())) return false;
    for (int o = 0; o < g.objects(); ++o) {
        const auto& c = t.comps[uz(o)];
        if (c.rows() != uz(t.tgt.dims[uz(o)]) || c.cols() != uz(t.src.dims[uz(o)])) return false;
    }
    for (int u = 0; u < static_cast<int>(g.size()); ++u) {
        const auto lhs = gf::matmul(t.tgt.mats[uz(u)], t.comps[uz(g.src(u))]);
        const auto rhs = gf::matmul(t.comps[uz(g.dst(u))], t.src.mats[uz(u)]);
        if (!(lhs == rhs)) return false;
    }
    return true;
}

GpdDiagram constant(const GpdPtr& base, const GpdPtr& fiber) {
    GpdDiagram d{base, std::vector<GpdPtr>(uz(base->objects()), fiber), {}};
    d.action.assign(base->size(), identity(fiber));
    return d;
}

VectDiagram constant(const GpdPtr& base, int p, int dim) {
    VectDiagram d{base, p, std::vector<int>(uz(base->objects()), dim), {}};
    d.mats.assign(base->size(), gf::idmat(uz(dim), static_cast<gf::Residue>(p)));
    return d;
}

VectDiagram zero_diagram(const GpdPtr& base, int p) { return constant(base, p, 0); }

VectDiagram precompose(const Functor& f, const VectDiagram& d) {
    if (f.dst.get() != d.base.get()) throw Error(ErrorKind::BaseMismatch, "reindexing along a functor into another base");
    VectDiagram r{f.src, d.p, {}, {}};
    for (int o : f.ob) r.dims.push_back(d.dims[uz(o)]);
    for (int m : f.mor) r.mats.push_back(d.mats[uz(m)]);
    return r;
}

GpdDiagram precompose(const Functor& f, const GpdDiagram& d) {
    if (f.dst.get() != d.base.get()) throw Error(ErrorKind::BaseMismatch, "reindexing along a functor into another base");
    GpdDiagram r{f.src, {}, {}};
    for (int o : f.ob) r.fibers.push_back(d.fibers[uz(o)]);
    for (int m : f.mor) r.action.push_back(d.action[uz(m)]);
    return r;
}

NatTrans precompose(const Functor& f, const NatTrans& t) {
    NatTrans r{precompose(f, t.src), precompose(f, t.tgt), {}};
    for (int o : f.ob) r.comps.push_back(t.comps[uz(o)]);
    return r;
}

VectDiagram tensor(const VectDiagram& a, const VectDiagram& b) {
    if (a.base.get() != b.base.get()) throw Error(ErrorKind::BaseMismatch, "tensor of diagrams over different bases");
    VectDiagram r{a.base, a.p, {}, {}};
    for (std::size_t o = 0; o < a.dims.size(); ++o) r.dims.push_back(a.dims[o] * b.dims[o]);
    for (std::size_t m = 0; m < a.mats.size(); ++m) r.mats.push_back(gf::kron(a.mats[m], b.mats[m]));
    return r;
}

NatTrans identity(const VectDiagram& d) {
    NatTrans t{d, d, {}};
    for (int n : d.dims) t.comps.push_back(gf::idmat(uz(n), static_cast<gf::Residue>(d.p)));
    return t;
}

NatTrans vcompose(const NatTrans& s, const NatTrans& t) {
    NatTrans r{t.src, s.tgt, {}};
    for (std::size_t o = 0; o < t.comps.size(); ++o) r.comps.push_back(gf::matmul(s.comps[o], t.comps[o]));
    return r;
}

std::vector<std::vector<Mat>> nat_basis(const VectDiagram& a, const VectDiagram& b) {
    const auto& g = *a.base;
    const auto P = static_cast<gf::Residue>(a.p);
    std::vector<std::size_t> off;
    std::size_t nvars = 0;
    for (int o = 0; o < g.objects(); ++o) {
        off.push_back(nvars);
        nvars += uz(b.dims[uz(o)]) * uz(a.dims[uz(o)]);
    }
    // Row per entry of b(u) X_s - X_t a(u), column per entry of the unknown components (row-major).
    std::size_t nrows = 0;
    for (int u = 0; u < static_cast<int>(g.size()); ++u) nrows += uz(b.dims[uz(g.dst(u))]) * uz(a.dims[uz(g.src(u))]);
    Mat sys(nrows, nvars, P);
    std::size_t row = 0;
    for (int u = 0; u < static_cast<int>(g.size()); ++u) {
        const int s = g.src(u);
        const int t = g.dst(u);
        const auto ds = uz(a.dims[uz(s)]);
        const auto es = uz(b.dims[uz(s)]);
        const auto dt = uz(a.dims[uz(t)]);
        const auto et = uz(b.dims[uz(t)]);
        const auto& bu = b.mats[uz(u)];
        const auto& au = a.mats[uz(u)];
        for (std::size_t i = 0; i < et; ++i) {
            for (std::size_t j = 0; j < ds; ++j, ++row) {
                for (std::size_t k = 0; k < es; ++k) sys.add(row, off[uz(s)] + k * ds + j, bu(i, k));
                for (std::size_t k = 0; k < dt; ++k) sys.add(row, off[uz(t)] + i * dt + k, -static_cast<std::int64_t>(au(k, j)));
            }
        }
    }
    const Mat ker = nvars == 0 ? Mat(0, 0, P) : gf::kernel_basis(sys);
    std::vector<std::vector<Mat>> out;
    for (std::size_t c = 0; c < ker.cols(); ++c) {
        std::vector<Mat> comps;
        for (int o = 0; o < g.objects(); ++o) {
            Mat m(uz(b.dims[uz(o)]), uz(a.dims[uz(o)]), P);
            for (std::size_t i = 0; i < m.rows(); ++i) {
                for (std::size_t j = 0; j < m.cols(); ++j) m.set(i, j, ker(off[uz(o)] + i * m.cols() + j, c));
            }
            comps.push_back(std::move(m));
        }
        out.push_back(std::move(comps));
    }
    return out;
}

// ---- Grothendieck construction ------------------------------------------------------------------

int Total::object(int gamma, int a) const {
    auto it = obj_index.find({gamma, a});
    if (it == obj_index.end()) bad("no such object in the total groupoid");
    return it->second;
}

int Total::morphism(int u, int alpha) const {
    auto it = mor_index.find({u, alpha});
    if (it == mor_index.end()) bad("no such morphism in the total groupoid");
    return it->second;
}

Total grothendieck(const GpdDiagram& a, std::size_t max_morphisms) {
    validate(a);
    const auto& g = *a.base;
    Total t;
    for (int c = 0; c < g.objects(); ++c) {
        for (int x = 0; x < a.fibers[uz(c)]->objects(); ++x) {
            t.obj_index[{c, x}] = static_cast<int>(t.obj.size());
            t.obj.emplace_back(c, x);
        }
    }
    std::vector<Arrow> arrows;
    for (int u = 0; u < static_cast<int>(g.size()); ++u) {
        const auto& act = a.action[uz(u)];
        const auto& fib = *a.fibers[uz(g.dst(u))];
        for (int x = 0; x < a.fibers[uz(g.src(u))]->objects(); ++x) {
            for (int al : fib.out(act.ob[uz(x)])) {
                if (t.mor.size() >= max_morphisms) throw Error(ErrorKind::SizeOverflow, "total groupoid too large");
                t.mor_index[{u, al}] = static_cast<int>(t.mor.size());
                t.mor.emplace_back(u, al);
                arrows.push_back({t.object(g.src(u), x), t.object(g.dst(u), fib.dst(al))});
            }
        }
    }
    auto gpd = FinGroupoid::build(static_cast<int>(t.obj.size()), arrows, [&](int h, int f) {
        const auto [v, be] = t.mor[uz(h)];
        const auto [u, al] = t.mor[uz(f)];
        const int w = g.comp(v, u);
        const int ga = a.fibers[uz(g.dst(v))]->comp(be, a.action[uz(v)].mor[uz(al)]);
        auto it = t.mor_index.find({w, ga});
        return it == t.mor_index.end() ? -1 : it->second;
    });
    t.gpd = std::make_shared<const FinGroupoid>(std::move(gpd));
    t.proj = Functor{t.gpd, a.base, {}, {}};
    for (const auto& [c, x] : t.obj) t.proj.ob.push_back(c);
    for (const auto& [u, al] : t.mor) t.proj.mor.push_back(u);
    validate(t.proj);
    return t;
}

// ---- Sections -----------------------------------------------------------------------------------

namespace {

// Triples (v, u, v∘u) grouped by the largest of the three morphism ids, so a depth-first
// assignment in id order can check each composite as soon as it is fully assigned.
std::vector<std::vector<std::array<int, 3>>> composite_checks(const FinGroupoid& g) {
    std::vector<std::vector<std::array<int, 3>>> r(g.size());
    for (int u = 0; u < static_cast<int>(g.size()); ++u) {
        for (int v : g.out(g.dst(u))) {
            const int w = g.comp(v, u);
            r[uz(std::max({u, v, w}))].push_back({v, u, w});
        }
    }
    return r;
}

bool composite_ok(const GpdDiagram& a, const Section& s, const std::array<int, 3>& c) {
    const auto& g = *a.base;
    const auto& fib = *a.fibers[uz(g.dst(c[0]))];
    return s.mor[uz(c[2])] == fib.comp(s.mor[uz(c[0])], a.action[uz(c[0])].mor[uz(s.mor[uz(c[1])])]);
}

}  // namespace

void validate(const GpdDiagram& a, const Section& s) {
    const auto& g = *a.base;
    if (s.ob.size() != uz(g.objects()) || s.mor.size() != g.size()) bad("section tables have the wrong size");
    for (int c = 0; c < g.objects(); ++c) {
        if (s.ob[uz(c)] < 0 || s.ob[uz(c)] >= a.fibers[uz(c)]->objects()) bad("section object out of range");
    }
    for (int u = 0; u < static_cast<int>(g.size()); ++u) {
        const auto& fib = *a.fibers[uz(g.dst(u))];
        const int m = s.mor[uz(u)];
        if (m < 0 || uz(m) >= fib.size()) bad("section morphism out of range");
        if (fib.src(m) != a.action[uz(u)].ob[uz(s.ob[uz(g.src(u))])] || fib.dst(m) != s.ob[uz(g.dst(u))]) {
            bad("section morphism has the wrong endpoints");
        }
    }
    for (int c = 0; c < g.objects(); ++c) {
        if (s.mor[uz(g.id(c))] != a.fibers[uz(c)]->id(s.ob[uz(c)])) bad("section does not preserve identities");
    }
    for (const auto& row : composite_checks(g)) {
        for (const auto& c : row) {
            if (!composite_ok(a, s, c)) bad("section does not preserve composites");
        }
    }
}

Functor section_functor(const Total& t, const GpdDiagram& a, const Section& s) {
    validate(a, s);
    Functor f{a.base, t.gpd, {}, {}};
    for (int c = 0; c < a.base->objects(); ++c) f.ob.push_back(t.object(c, s.ob[uz(c)]));
    for (int u = 0; u < static_cast<int>(a.base->size()); ++u) f.mor.push_back(t.morphism(u, s.mor[uz(u)]));
    validate(f);
    return f;
}

std::vector<Section> all_sections(const GpdDiagram& a, std::size_t limit) {
    const auto& g = *a.base;
    const auto checks = composite_checks(g);
    std::vector<Section> out;
    std::size_t visits = 0;
    Section s{std::vector<int>(uz(g.objects()), 0), std::vector<int>(g.size(), -1)};

    auto dfs = [&](auto& self, std::size_t u) -> void {
        if (++visits > limit * 64) throw Error(ErrorKind::SizeOverflow, "section search too large");
        if (u == g.size()) {
            if (out.size() >= limit) throw Error(ErrorKind::SizeOverflow, "too many sections");
            out.push_back(s);
            return;
        }
        const int ui = static_cast<int>(u);
        const auto& fib = *a.fibers[uz(g.dst(ui))];
        const int from = a.action[u].ob[uz(s.ob[uz(g.src(ui))])];
        const int to = s.ob[uz(g.dst(ui))];
        std::vector<int> cands = g.src(ui) == g.dst(ui) && g.id(g.src(ui)) == ui ? std::vector<int>{fib.id(to)}
                                                                                  : fib.hom(from, to);
        if (from != to && g.id(g.src(ui)) == ui) cands.clear();
        for (int m : cands) {
            s.mor[u] = m;
            bool ok = true;
            for (const auto& c : checks[u]) ok = ok && composite_ok(a, s, c);
            if (ok) self(self, u + 1);
        }
        s.mor[u] = -1;
    };

    auto objects = [&](auto& self, int c) -> void {
        if (c == g.objects()) {
            dfs(dfs, 0);
            return;
        }
        for (int x = 0; x < a.fibers[uz(c)]->objects(); ++x) {
            s.ob[uz(c)] = x;
            self(self, c + 1);
        }
    };
    objects(objects, 0);
    return out;
}

}  // namespace ldtt::gpd
