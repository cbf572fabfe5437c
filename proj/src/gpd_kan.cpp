#include <algorithm>
#include <map>
#include <tuple>

#include "ldtt/error.hpp"
#include "ldtt/gpd.hpp"

namespace ldtt::gpd {

using gf::Mat;

namespace {

std::size_t uz(int i) { return static_cast<std::size_t>(i); }

gf::Residue field(int p) { return static_cast<gf::Residue>(p); }

// S × d block embedding at row `off`.
Mat embed(std::size_t total, std::size_t off, std::size_t d, gf::Residue p) {
    Mat m(total, d, p);
    for (std::size_t i = 0; i < d; ++i) m.set(off + i, i, 1);
    return m;
}

std::vector<std::size_t> block_offsets(const Comma& c, const VectDiagram& f, std::size_t* total) {
    std::vector<std::size_t> off;
    std::size_t s = 0;
    for (const auto& [a, u] : c.obj) {
        off.push_back(s);
        s += uz(f.dims[uz(a)]);
    }
    *total = s;
    return off;
}

int comma_index(const Comma& c, int a, int u) {
    for (std::size_t i = 0; i < c.obj.size(); ++i) {
        if (c.obj[i].first == a && c.obj[i].second == u) return static_cast<int>(i);
    }
    throw Error(ErrorKind::InvalidStructure, "comma object not found");
}

Mat block_diag(const Comma& c, const NatTrans& t, const std::vector<std::size_t>& out_off, std::size_t out_total,
               const std::vector<std::size_t>& in_off, std::size_t in_total, gf::Residue p) {
    Mat m(out_total, in_total, p);
    for (std::size_t i = 0; i < c.obj.size(); ++i) {
        const auto& x = t.comps[uz(c.obj[i].first)];
        for (std::size_t r = 0; r < x.rows(); ++r) {
            for (std::size_t k = 0; k < x.cols(); ++k) m.set(out_off[i] + r, in_off[i] + k, x(r, k));
        }
    }
    return m;
}

bool all_invertible(const NatTrans& t) {
    for (const auto& c : t.comps) {
        if (!gf::is_invertible(c)) return false;
    }
    return true;
}

bool same(const NatTrans& a, const NatTrans& b) { return a.comps == b.comps; }

void note(std::string* why, const std::string& s) {
    if (why) *why = s;
}

}  // namespace

Comma comma_under(const Functor& p, int b) {
    const auto& A = *p.src;
    const auto& B = *p.dst;
    Comma c;
    std::map<std::pair<int, int>, int> idx;
    for (int a = 0; a < A.objects(); ++a) {
        for (int u : B.hom(p.ob[uz(a)], b)) {
            idx[{a, u}] = static_cast<int>(c.obj.size());
            c.obj.emplace_back(a, u);
        }
    }
    for (std::size_t i = 0; i < c.obj.size(); ++i) {
        const auto [a, u] = c.obj[i];
        for (int f : A.out(a)) {
            // (a, u) → (a', u') with u' ∘ p f = u.
            const int u2 = B.comp(u, B.inv(p.mor[uz(f)]));
            c.mor.emplace_back(static_cast<int>(i), idx.at({A.dst(f), u2}), f);
        }
    }
    return c;
}

Comma comma_over(const Functor& p, int b) {
    const auto& A = *p.src;
    const auto& B = *p.dst;
    Comma c;
    std::map<std::pair<int, int>, int> idx;
    for (int a = 0; a < A.objects(); ++a) {
        for (int u : B.hom(b, p.ob[uz(a)])) {
            idx[{a, u}] = static_cast<int>(c.obj.size());
            c.obj.emplace_back(a, u);
        }
    }
    for (std::size_t i = 0; i < c.obj.size(); ++i) {
        const auto [a, u] = c.obj[i];
        for (int f : A.out(a)) c.mor.emplace_back(static_cast<int>(i), idx.at({A.dst(f), B.comp(p.mor[uz(f)], u)}), f);
    }
    return c;
}

Lan lan(const Functor& p, const VectDiagram& f) {
    if (f.base.get() != p.src.get()) throw Error(ErrorKind::BaseMismatch, "Lan: diagram not over the functor's domain");
    const auto& A = *p.src;
    const auto& B = *p.dst;
    const auto P = field(f.p);
    Lan L;
    L.ext = VectDiagram{p.dst, f.p, {}, {}};
    std::vector<std::size_t> totals;
    for (int b = 0; b < B.objects(); ++b) {
        Comma c = comma_under(p, b);
        std::size_t total = 0;
        auto off = block_offsets(c, f, &total);
        // Column per (non-identity comma morphism, basis vector): in_i e - in_j F(f) e.
        std::vector<Mat> cols;
        for (const auto& [i, j, m] : c.mor) {
            if (m == A.id(A.src(m))) continue;
            const auto d = uz(f.dims[uz(A.src(m))]);
            Mat r = gf::sub(embed(total, off[uz(i)], d, P),
                            gf::matmul(embed(total, off[uz(j)], uz(f.dims[uz(A.dst(m))]), P), f.mats[uz(m)]));
            cols.push_back(std::move(r));
        }
        Mat rel(total, 0, P);
        for (const auto& r : cols) rel = gf::hstack(rel, r);
        auto ck = gf::cokernel(rel);
        L.ext.dims.push_back(static_cast<int>(ck.dim));
        L.lift.push_back(gf::right_inverse(ck.proj));
        L.quot.push_back(std::move(ck.proj));
        L.rel.push_back(std::move(rel));
        L.commas.push_back(std::move(c));
        L.offsets.push_back(std::move(off));
        totals.push_back(total);
    }
    for (int v = 0; v < static_cast<int>(B.size()); ++v) {
        const int b = B.src(v);
        const int b2 = B.dst(v);
        const auto& c = L.commas[uz(b)];
        Mat shift(totals[uz(b2)], totals[uz(b)], P);
        for (std::size_t i = 0; i < c.obj.size(); ++i) {
            const auto [a, u] = c.obj[i];
            const int j = comma_index(L.commas[uz(b2)], a, B.comp(v, u));
            for (int k = 0; k < f.dims[uz(a)]; ++k) shift.set(L.offsets[uz(b2)][uz(j)] + uz(k), L.offsets[uz(b)][i] + uz(k), 1);
        }
        L.ext.mats.push_back(gf::matmul(L.quot[uz(b2)], gf::matmul(shift, L.lift[uz(b)])));
    }
    L.unit = NatTrans{f, precompose(p, L.ext), {}};
    for (int a = 0; a < A.objects(); ++a) {
        const int b = p.ob[uz(a)];
        const int i = comma_index(L.commas[uz(b)], a, B.id(b));
        L.unit.comps.push_back(
            gf::matmul(L.quot[uz(b)], embed(totals[uz(b)], L.offsets[uz(b)][uz(i)], uz(f.dims[uz(a)]), P)));
    }
    return L;
}

Ran ran(const Functor& p, const VectDiagram& f) {
    if (f.base.get() != p.src.get()) throw Error(ErrorKind::BaseMismatch, "Ran: diagram not over the functor's domain");
    const auto& A = *p.src;
    const auto& B = *p.dst;
    const auto P = field(f.p);
    Ran R;
    R.ext = VectDiagram{p.dst, f.p, {}, {}};
    std::vector<std::size_t> totals;
    for (int b = 0; b < B.objects(); ++b) {
        Comma c = comma_over(p, b);
        std::size_t total = 0;
        auto off = block_offsets(c, f, &total);
        // Rows per (non-identity comma morphism, coordinate): F(f) x_i - x_j.
        Mat diff(0, total, P);
        for (const auto& [i, j, m] : c.mor) {
            if (m == A.id(A.src(m))) continue;
            const auto dj = uz(f.dims[uz(A.dst(m))]);
            Mat r = gf::sub(gf::matmul(f.mats[uz(m)], gf::transpose(embed(total, off[uz(i)], uz(f.dims[uz(A.src(m))]), P))),
                            gf::transpose(embed(total, off[uz(j)], dj, P)));
            diff = gf::vstack(diff, r);
        }
        Mat k = gf::kernel_basis(diff);
        R.ext.dims.push_back(static_cast<int>(k.cols()));
        R.incl.push_back(std::move(k));
        R.commas.push_back(std::move(c));
        R.offsets.push_back(std::move(off));
        totals.push_back(total);
    }
    for (int v = 0; v < static_cast<int>(B.size()); ++v) {
        const int b = B.src(v);
        const int b2 = B.dst(v);
        const auto& c2 = R.commas[uz(b2)];
        // y at (a, u' : b' → p a) is x at (a, u' ∘ v).
        Mat sel(totals[uz(b2)], totals[uz(b)], P);
        for (std::size_t j = 0; j < c2.obj.size(); ++j) {
            const auto [a, u2] = c2.obj[j];
            const int i = comma_index(R.commas[uz(b)], a, B.comp(u2, v));
            for (int k = 0; k < f.dims[uz(a)]; ++k) sel.set(R.offsets[uz(b2)][j] + uz(k), R.offsets[uz(b)][uz(i)] + uz(k), 1);
        }
        const Mat img = gf::matmul(sel, R.incl[uz(b)]);
        auto coords = gf::solve(R.incl[uz(b2)], img);
        if (!coords) throw Error(ErrorKind::InvalidStructure, "Ran: transported element left the limit");
        R.ext.mats.push_back(*coords);
    }
    R.counit = NatTrans{precompose(p, R.ext), f, {}};
    for (int a = 0; a < A.objects(); ++a) {
        const int b = p.ob[uz(a)];
        const int i = comma_index(R.commas[uz(b)], a, B.id(b));
        const Mat proj = gf::transpose(embed(totals[uz(b)], R.offsets[uz(b)][uz(i)], uz(f.dims[uz(a)]), P));
        R.counit.comps.push_back(gf::matmul(proj, R.incl[uz(b)]));
    }
    return R;
}

NatTrans lan_map(const Functor& p, const NatTrans& alpha) {
    const Lan L1 = lan(p, alpha.src);
    const Lan L2 = lan(p, alpha.tgt);
    const auto P = field(alpha.src.p);
    NatTrans t{L1.ext, L2.ext, {}};
    for (std::size_t b = 0; b < L1.commas.size(); ++b) {
        const Mat blocks = block_diag(L1.commas[b], alpha, L2.offsets[b], L2.quot[b].cols(), L1.offsets[b],
                                      L1.quot[b].cols(), P);
        t.comps.push_back(gf::matmul(L2.quot[b], gf::matmul(blocks, L1.lift[b])));
    }
    return t;
}

NatTrans ran_map(const Functor& p, const NatTrans& alpha) {
    const Ran R1 = ran(p, alpha.src);
    const Ran R2 = ran(p, alpha.tgt);
    const auto P = field(alpha.src.p);
    NatTrans t{R1.ext, R2.ext, {}};
    for (std::size_t b = 0; b < R1.commas.size(); ++b) {
        const Mat blocks = block_diag(R1.commas[b], alpha, R2.offsets[b], R2.incl[b].rows(), R1.offsets[b],
                                      R1.incl[b].rows(), P);
        auto c = gf::solve(R2.incl[b], gf::matmul(blocks, R1.incl[b]));
        if (!c) throw Error(ErrorKind::InvalidStructure, "Ran: image left the limit");
        t.comps.push_back(*c);
    }
    return t;
}

NatTrans lan_counit(const Functor& p, const VectDiagram& g) {
    const Lan L = lan(p, precompose(p, g));
    const auto P = field(g.p);
    NatTrans t{L.ext, g, {}};
    for (std::size_t b = 0; b < L.commas.size(); ++b) {
        Mat row(uz(g.dims[b]), 0, P);
        for (const auto& [a, u] : L.commas[b].obj) row = gf::hstack(row, g.mats[uz(u)]);
        if (!gf::matmul(row, L.rel[b]).is_zero()) throw Error(ErrorKind::InvalidStructure, "Lan counit not well defined");
        t.comps.push_back(gf::matmul(row, L.lift[b]));
    }
    return t;
}

NatTrans ran_unit(const Functor& p, const VectDiagram& g) {
    const Ran R = ran(p, precompose(p, g));
    const auto P = field(g.p);
    NatTrans t{g, R.ext, {}};
    for (std::size_t b = 0; b < R.commas.size(); ++b) {
        Mat col(0, uz(g.dims[b]), P);
        for (const auto& [a, u] : R.commas[b].obj) col = gf::vstack(col, g.mats[uz(u)]);
        auto c = gf::solve(R.incl[b], col);
        if (!c) throw Error(ErrorKind::InvalidStructure, "Ran unit not well defined");
        t.comps.push_back(*c);
    }
    return t;
}

TriangleReport check_triangles(const Functor& p, const VectDiagram& f, const VectDiagram& g) {
    TriangleReport r;
    {
        const Lan L = lan(p, f);
        const NatTrans e = lan_counit(p, L.ext);
        const NatTrans lhs = vcompose(e, lan_map(p, L.unit));
        r.lan_left = is_natural(L.unit) && is_natural(e) && same(lhs, identity(L.ext));
    }
    {
        const VectDiagram pg = precompose(p, g);
        const Lan L = lan(p, pg);
        const NatTrans e = lan_counit(p, g);
        const NatTrans lhs = vcompose(precompose(p, e), L.unit);
        r.lan_right = is_natural(e) && same(lhs, identity(pg));
    }
    {
        const Ran R = ran(p, f);
        const NatTrans h = ran_unit(p, R.ext);
        const NatTrans lhs = vcompose(ran_map(p, R.counit), h);
        r.ran_left = is_natural(R.counit) && is_natural(h) && same(lhs, identity(R.ext));
    }
    {
        const VectDiagram pg = precompose(p, g);
        const Ran R = ran(p, pg);
        const NatTrans h = ran_unit(p, g);
        const NatTrans lhs = vcompose(R.counit, precompose(p, h));
        r.ran_right = is_natural(h) && same(lhs, identity(pg));
    }
    return r;
}

namespace {

// Calls `fn` with every family of matrices rows[o] × cols[o], until it returns false.
template <class Fn>
void for_each_family(const std::vector<int>& rows, const std::vector<int>& cols, int p, std::uint64_t cap, Fn&& fn) {
    const auto P = field(p);
    std::vector<std::uint64_t> radix;
    long double total = 1;
    for (std::size_t o = 0; o < rows.size(); ++o) {
        radix.push_back(gf::count_matrices(uz(rows[o]), uz(cols[o]), P));
        total *= static_cast<long double>(radix.back());
    }
    if (total > static_cast<long double>(cap)) throw Error(ErrorKind::SizeOverflow, "hom-set enumeration too large");
    std::vector<std::uint64_t> digit(radix.size(), 0);
    while (true) {
        std::vector<Mat> fam;
        for (std::size_t o = 0; o < radix.size(); ++o) fam.push_back(gf::decode_matrix(digit[o], uz(rows[o]), uz(cols[o]), P));
        if (!fn(fam)) return;
        std::size_t i = radix.size();
        while (i > 0) {
            --i;
            if (++digit[i] < radix[i]) break;
            digit[i] = 0;
            if (i == 0) return;
        }
        if (radix.empty()) return;
    }
}

}  // namespace

HomBijection check_adjunction(const Functor& p, const VectDiagram& f, const VectDiagram& g, std::uint64_t max_families) {
    const VectDiagram pg = precompose(p, g);
    const Lan L = lan(p, f);
    const NatTrans eps = lan_counit(p, g);
    HomBijection out;

    std::vector<std::vector<Mat>> lhs;
    for_each_family(pg.dims, f.dims, f.p, max_families, [&](const std::vector<Mat>& fam) {
        if (is_natural(NatTrans{f, pg, fam})) lhs.push_back(fam);
        return true;
    });
    std::vector<std::vector<Mat>> rhs;
    for_each_family(g.dims, L.ext.dims, f.p, max_families, [&](const std::vector<Mat>& fam) {
        if (is_natural(NatTrans{L.ext, g, fam})) rhs.push_back(fam);
        return true;
    });
    out.lhs = lhs.size();
    out.rhs = rhs.size();

    bool ok = lhs.size() == rhs.size();
    std::vector<std::vector<Mat>> images;
    for (const auto& x : lhs) {
        if (!ok) break;
        const NatTrans phi{f, pg, x};
        const NatTrans y = vcompose(eps, lan_map(p, phi));
        if (!is_natural(y)) ok = false;
        // Transpose back: p*ψ ∘ η.
        const NatTrans back = vcompose(precompose(p, y), L.unit);
        if (back.comps != x) ok = false;
        images.push_back(y.comps);
    }
    if (ok) {
        std::sort(images.begin(), images.end(), [](const auto& a, const auto& b) {
            for (std::size_t i = 0; i < a.size(); ++i) {
                if (a[i].entries() != b[i].entries()) return a[i].entries() < b[i].entries();
            }
            return false;
        });
        ok = std::adjacent_find(images.begin(), images.end()) == images.end();
    }
    out.bijective = ok;
    return out;
}

PullbackSquare pullback_square(const GpdDiagram& a, const Functor& f) {
    if (f.dst.get() != a.base.get()) throw Error(ErrorKind::BaseMismatch, "pullback: functor does not land in the base");
    PullbackSquare sq{f, a, grothendieck(a), {}, {}};
    sq.pulled = grothendieck(precompose(f, a));
    sq.q = Functor{sq.pulled.gpd, sq.top.gpd, {}, {}};
    for (const auto& [d, x] : sq.pulled.obj) sq.q.ob.push_back(sq.top.object(f.ob[uz(d)], x));
    for (const auto& [w, al] : sq.pulled.mor) sq.q.mor.push_back(sq.top.morphism(f.mor[uz(w)], al));
    validate(sq.q);
    return sq;
}

void verify_pullback(const PullbackSquare& sq) {
    const auto fail = [](const std::string& s) { throw Error(ErrorKind::NotAPullback, s); };
    const auto& pi = sq.top.proj;
    const auto& pi2 = sq.pulled.proj;
    if (!(compose(pi, sq.q) == compose(sq.f, pi2))) fail("square does not commute");
    // Pairs (δ, x) with f δ = π x, and (w, m) with f w = π m, must be hit exactly once.
    std::map<std::pair<int, int>, int> objs;
    for (int i = 0; i < sq.pulled.gpd->objects(); ++i) {
        if (!objs.emplace(std::make_pair(pi2.ob[uz(i)], sq.q.ob[uz(i)]), i).second) fail("two objects over one pair");
    }
    std::size_t want = 0;
    for (int d = 0; d < sq.f.src->objects(); ++d) {
        for (int x = 0; x < sq.top.gpd->objects(); ++x) want += pi.ob[uz(x)] == sq.f.ob[uz(d)];
    }
    if (objs.size() != want) fail("object pairs missing");
    std::map<std::pair<int, int>, int> mors;
    for (int i = 0; i < static_cast<int>(sq.pulled.gpd->size()); ++i) {
        if (!mors.emplace(std::make_pair(pi2.mor[uz(i)], sq.q.mor[uz(i)]), i).second) fail("two morphisms over one pair");
    }
    want = 0;
    for (int w = 0; w < static_cast<int>(sq.f.src->size()); ++w) {
        for (int m = 0; m < static_cast<int>(sq.top.gpd->size()); ++m) want += pi.mor[uz(m)] == sq.f.mor[uz(w)];
    }
    if (mors.size() != want) fail("morphism pairs missing");
}

bool check_beck_chevalley(const PullbackSquare& sq, const VectDiagram& f, std::string* why) {
    verify_pullback(sq);
    const auto P = field(f.p);
    const VectDiagram qf = precompose(sq.q, f);

    // ⊏ side: Lan_{π'} q* F → f* Lan_π F.
    const Lan L1 = lan(sq.pulled.proj, qf);
    const Lan L2 = lan(sq.top.proj, f);
    NatTrans canon{L1.ext, precompose(sq.f, L2.ext), {}};
    for (int d = 0; d < sq.f.src->objects(); ++d) {
        const int g = sq.f.ob[uz(d)];
        const auto& c1 = L1.commas[uz(d)];
        Mat m(L2.quot[uz(g)].cols(), L1.quot[uz(d)].cols(), P);
        for (std::size_t i = 0; i < c1.obj.size(); ++i) {
            const auto [x, w] = c1.obj[i];
            const int j = comma_index(L2.commas[uz(g)], sq.q.ob[uz(x)], sq.f.mor[uz(w)]);
            for (int k = 0; k < qf.dims[uz(x)]; ++k) m.set(L2.offsets[uz(g)][uz(j)] + uz(k), L1.offsets[uz(d)][i] + uz(k), 1);
        }
        const Mat qm = gf::matmul(L2.quot[uz(g)], m);
        if (!gf::matmul(qm, L1.rel[uz(d)]).is_zero()) {
            note(why, "Lan comparison not well defined");
            return false;
        }
        canon.comps.push_back(gf::matmul(qm, L1.lift[uz(d)]));
    }
    if (!is_natural(canon) || !all_invertible(canon)) {
        note(why, "Lan comparison not a natural isomorphism");
        return false;
    }

    // ⊓ side: f* Ran_π F → Ran_{π'} q* F.
    const Ran R1 = ran(sq.pulled.proj, qf);
    const Ran R2 = ran(sq.top.proj, f);
    NatTrans rcanon{precompose(sq.f, R2.ext), R1.ext, {}};
    for (int d = 0; d < sq.f.src->objects(); ++d) {
        const int g = sq.f.ob[uz(d)];
        const auto& c1 = R1.commas[uz(d)];
        Mat m(R1.incl[uz(d)].rows(), R2.incl[uz(g)].rows(), P);
        for (std::size_t i = 0; i < c1.obj.size(); ++i) {
            const auto [x, w] = c1.obj[i];
            const int j = comma_index(R2.commas[uz(g)], sq.q.ob[uz(x)], sq.f.mor[uz(w)]);
            for (int k = 0; k < qf.dims[uz(x)]; ++k) m.set(R1.offsets[uz(d)][i] + uz(k), R2.offsets[uz(g)][uz(j)] + uz(k), 1);
        }
        auto c = gf::solve(R1.incl[uz(d)], gf::matmul(m, R2.incl[uz(g)]));
        if (!c) {
            note(why, "Ran comparison not well defined");
            return false;
        }
        rcanon.comps.push_back(*c);
    }
    if (!is_natural(rcanon) || !all_invertible(rcanon)) {
        note(why, "Ran comparison not a natural isomorphism");
        return false;
    }
    return true;
}

bool check_frobenius(const Functor& p, const VectDiagram& xi, const VectDiagram& f, std::string* why) {
    const auto P = field(f.p);
    const auto& B = *p.dst;
    const Lan left = lan(p, tensor(precompose(p, xi), f));
    const Lan lf = lan(p, f);
    const VectDiagram right = tensor(xi, lf.ext);
    NatTrans canon{left.ext, right, {}};
    for (int b = 0; b < B.objects(); ++b) {
        const auto& c = left.commas[uz(b)];
        Mat m(uz(right.dims[uz(b)]), 0, P);
        for (std::size_t i = 0; i < c.obj.size(); ++i) {
            const auto [a, u] = c.obj[i];
            const Mat in = gf::matmul(lf.quot[uz(b)], embed(lf.quot[uz(b)].cols(), lf.offsets[uz(b)][i], uz(f.dims[uz(a)]), P));
            m = gf::hstack(m, gf::kron(xi.mats[uz(u)], in));
        }
        if (!gf::matmul(m, left.rel[uz(b)]).is_zero()) {
            note(why, "Frobenius comparison not well defined");
            return false;
        }
        canon.comps.push_back(gf::matmul(m, left.lift[uz(b)]));
    }
    if (!is_natural(canon)) {
        note(why, "Frobenius comparison not natural");
        return false;
    }
    if (!all_invertible(canon)) {
        note(why, "Frobenius comparison not invertible");
        return false;
    }
    return true;
}

}  // namespace ldtt::gpd
