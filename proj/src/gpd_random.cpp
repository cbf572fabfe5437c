#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <queue>

#include "ldtt/error.hpp"
#include "ldtt/gpd.hpp"

namespace ldtt::gpd {

using gf::Mat;

namespace {

std::size_t uz(int i) { return static_cast<std::size_t>(i); }

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// Root of each object's component and a chosen arrow root → object.
struct Tree {
    std::vector<int> root;
    std::vector<int> arrow;
};

Tree spanning(const FinGroupoid& g) {
    Tree t{std::vector<int>(uz(g.objects()), -1), std::vector<int>(uz(g.objects()), -1)};
    for (int r = 0; r < g.objects(); ++r) {
        if (t.root[uz(r)] >= 0) continue;
        t.root[uz(r)] = r;
        t.arrow[uz(r)] = g.id(r);
        std::queue<int> q;
        q.push(r);
        while (!q.empty()) {
            const int i = q.front();
            q.pop();
            for (int m : g.out(i)) {
                const int j = g.dst(m);
                if (t.root[uz(j)] >= 0) continue;
                t.root[uz(j)] = r;
                t.arrow[uz(j)] = g.comp(m, t.arrow[uz(i)]);
                q.push(j);
            }
        }
    }
    return t;
}

// The vertex-group element t_j⁻¹ ∘ f ∘ t_i at the root.
int at_root(const FinGroupoid& g, const Tree& t, int f) {
    return g.comp(g.inv(t.arrow[uz(g.dst(f))]), g.comp(f, t.arrow[uz(g.src(f))]));
}

// A homomorphism from Aut(root) into a group with multiplication `mul`, found by sampling
// generator images and checking the full table. Falls back to the trivial homomorphism.
template <class T, class Mul, class Eq, class Sample>
std::map<int, T> vertex_hom(const FinGroupoid& g, int root, const T& one, Mul mul, Eq eq, Sample sample) {
    const auto elems = g.hom(root, root);
    std::vector<int> gens;
    std::vector<bool> in(g.size(), false);
    in[uz(g.id(root))] = true;
    for (int e : elems) {
        if (in[uz(e)]) continue;
        gens.push_back(e);
        std::vector<int> span;
        for (int x : elems) {
            if (in[uz(x)]) span.push_back(x);
        }
        for (std::size_t k = 0; k < span.size(); ++k) {
            for (int s : gens) {
                const int y = g.comp(s, span[k]);
                if (!in[uz(y)]) {
                    in[uz(y)] = true;
                    span.push_back(y);
                }
            }
        }
    }
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::map<int, T> img;
        img.emplace(g.id(root), one);
        std::map<int, T> gen_img;
        for (int s : gens) gen_img.emplace(s, sample());
        std::vector<int> order{g.id(root)};
        bool ok = true;
        for (std::size_t k = 0; k < order.size() && ok; ++k) {
            const int x = order[k];
            for (int s : gens) {
                const int y = g.comp(s, x);
                T v = mul(gen_img.at(s), img.at(x));
                auto it = img.find(y);
                if (it == img.end()) {
                    img.emplace(y, std::move(v));
                    order.push_back(y);
                } else if (!eq(it->second, v)) {
                    ok = false;
                    break;
                }
            }
        }
        for (int x : elems) {
            for (int y : elems) ok = ok && eq(img.at(g.comp(x, y)), mul(img.at(x), img.at(y)));
        }
        if (ok) return img;
    }
    std::map<int, T> trivial;
    for (int e : elems) trivial.emplace(e, one);
    return trivial;
}

Mat random_invertible(Rng& rng, int d, int p) {
    const auto P = static_cast<gf::Residue>(p);
    const auto n = gf::count_matrices(uz(d), uz(d), P);
    while (true) {
        Mat m = gf::decode_matrix(std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng), uz(d), uz(d), P);
        if (gf::is_invertible(m)) return m;
    }
}

}  // namespace

GpdPtr random_groupoid(Rng& rng, int max_objects, int max_morphisms) {
    struct Piece {
        std::function<GpdPtr()> make;
        int objects;
        int morphisms;
    };
    const std::vector<Piece> menu{
        {[] { return terminal(); }, 1, 1},
        {[] { return codiscrete(2); }, 2, 4},
        {[] { return cyclic(2); }, 1, 2},
        {[] { return product(cyclic(2), codiscrete(2)); }, 2, 8},
        {[] { return cyclic(3); }, 1, 3},
        {[] { return cyclic(4); }, 1, 4},
        {[] { return klein(); }, 1, 4},
        {[] { return s3(); }, 1, 6},
    };
    GpdPtr g;
    int objs = 0;
    int mors = 0;
    while (true) {
        std::vector<std::size_t> fits;
        for (std::size_t i = 0; i < menu.size(); ++i) {
            if (objs + menu[i].objects <= max_objects && mors + menu[i].morphisms <= max_morphisms) fits.push_back(i);
        }
        if (fits.empty()) break;
        const auto& piece = menu[fits[uz(uniform(rng, 0, static_cast<int>(fits.size()) - 1))]];
        GpdPtr c = piece.make();
        g = g ? coproduct(g, c) : c;
        objs += piece.objects;
        mors += piece.morphisms;
        if (uniform(rng, 0, 2) == 0) break;
    }
    if (!g) throw Error(ErrorKind::Usage, "groupoid budget admits no component");
    return g;
}

Functor random_functor(Rng& rng, const GpdPtr& a, const GpdPtr& b) {
    const Tree t = spanning(*a);
    Functor f{a, b, std::vector<int>(uz(a->objects()), -1), std::vector<int>(a->size(), -1)};
    std::vector<int> tree_img(uz(a->objects()), -1);
    std::map<int, std::map<int, int>> homs;
    for (int r = 0; r < a->objects(); ++r) {
        if (t.root[uz(r)] != r) continue;
        const int t0 = uniform(rng, 0, b->objects() - 1);
        const auto aut = b->hom(t0, t0);
        homs[r] = vertex_hom<int>(
            *a, r, b->id(t0), [&](int x, int y) { return b->comp(x, y); }, [](int x, int y) { return x == y; },
            [&] { return aut[uz(uniform(rng, 0, static_cast<int>(aut.size()) - 1))]; });
        for (int i = 0; i < a->objects(); ++i) {
            if (t.root[uz(i)] != r) continue;
            const auto& out = b->out(t0);
            tree_img[uz(i)] = i == r ? b->id(t0) : out[uz(uniform(rng, 0, static_cast<int>(out.size()) - 1))];
            f.ob[uz(i)] = b->dst(tree_img[uz(i)]);
        }
    }
    for (int m = 0; m < static_cast<int>(a->size()); ++m) {
        const int i = a->src(m);
        const int j = a->dst(m);
        const int g = homs[t.root[uz(i)]].at(at_root(*a, t, m));
        f.mor[uz(m)] = b->comp(tree_img[uz(j)], b->comp(g, b->inv(tree_img[uz(i)])));
    }
    validate(f);
    return f;
}

VectDiagram random_vect(Rng& rng, const GpdPtr& base, int p, int max_dim) {
    const auto P = static_cast<gf::Residue>(p);
    const Tree t = spanning(*base);
    VectDiagram d{base, p, std::vector<int>(uz(base->objects()), 0), std::vector<Mat>(base->size())};
    std::vector<Mat> transport(uz(base->objects()));
    std::map<int, std::map<int, Mat>> reps;
    for (int r = 0; r < base->objects(); ++r) {
        if (t.root[uz(r)] != r) continue;
        const int dim = uniform(rng, 0, max_dim);
        reps[r] = vertex_hom<Mat>(
            *base, r, gf::idmat(uz(dim), P), [](const Mat& x, const Mat& y) { return gf::matmul(x, y); },
            [](const Mat& x, const Mat& y) { return x == y; }, [&] { return random_invertible(rng, dim, p); });
        for (int i = 0; i < base->objects(); ++i) {
            if (t.root[uz(i)] != r) continue;
            d.dims[uz(i)] = dim;
            transport[uz(i)] = i == r ? gf::idmat(uz(dim), P) : random_invertible(rng, dim, p);
        }
    }
    for (int m = 0; m < static_cast<int>(base->size()); ++m) {
        const int i = base->src(m);
        const int j = base->dst(m);
        const Mat& rho = reps[t.root[uz(i)]].at(at_root(*base, t, m));
        d.mats[uz(m)] = gf::matmul(transport[uz(j)], gf::matmul(rho, *gf::inverse(transport[uz(i)])));
    }
    validate(d);
    return d;
}

GpdDiagram random_gpd_diagram(Rng& rng, const GpdPtr& base, int max_fiber) {
    if (uniform(rng, 0, 2) == 0) return constant(base, cyclic(2));
    const Tree t = spanning(*base);
    using Perm = std::vector<int>;
    const auto mul = [](const Perm& x, const Perm& y) {
        Perm z(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) z[i] = x[uz(y[i])];
        return z;
    };
    const auto inverse = [](const Perm& x) {
        Perm z(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) z[uz(x[i])] = static_cast<int>(i);
        return z;
    };
    GpdDiagram d{base, std::vector<GpdPtr>(uz(base->objects())), {}};
    std::vector<Perm> transport(uz(base->objects()));
    std::map<int, std::map<int, Perm>> reps;
    for (int r = 0; r < base->objects(); ++r) {
        if (t.root[uz(r)] != r) continue;
        const int n = uniform(rng, 1, max_fiber);
        const GpdPtr fib = discrete(n);
        Perm id(uz(n));
        for (int i = 0; i < n; ++i) id[uz(i)] = i;
        const auto sample = [&] {
            Perm x = id;
            std::shuffle(x.begin(), x.end(), rng);
            return x;
        };
        reps[r] = vertex_hom<Perm>(*base, r, id, mul, [](const Perm& x, const Perm& y) { return x == y; }, sample);
        for (int i = 0; i < base->objects(); ++i) {
            if (t.root[uz(i)] != r) continue;
            d.fibers[uz(i)] = fib;
            transport[uz(i)] = i == r ? id : sample();
        }
    }
    for (int m = 0; m < static_cast<int>(base->size()); ++m) {
        const int i = base->src(m);
        const int j = base->dst(m);
        const Perm act = mul(transport[uz(j)], mul(reps[t.root[uz(i)]].at(at_root(*base, t, m)), inverse(transport[uz(i)])));
        d.action.push_back(Functor{d.fibers[uz(i)], d.fibers[uz(j)], act, act});
    }
    validate(d);
    return d;
}

NatTrans random_nat(Rng& rng, const VectDiagram& a, const VectDiagram& b) {
    const auto P = static_cast<gf::Residue>(a.p);
    NatTrans t{a, b, {}};
    for (std::size_t o = 0; o < a.dims.size(); ++o) t.comps.push_back(gf::zeros(uz(b.dims[o]), uz(a.dims[o]), P));
    for (const auto& v : nat_basis(a, b)) {
        const int k = uniform(rng, 0, a.p - 1);
        for (std::size_t o = 0; o < v.size(); ++o) t.comps[o] = gf::add(t.comps[o], gf::scale(v[o], static_cast<gf::Residue>(k)));
    }
    return t;
}

std::pair<VectDiagram, NatTrans> random_iso(Rng& rng, const VectDiagram& a) {
    VectDiagram b = a;
    NatTrans t{a, {}, {}};
    for (int d : a.dims) t.comps.push_back(random_invertible(rng, d, a.p));
    const auto& g = *a.base;
    for (int m = 0; m < static_cast<int>(g.size()); ++m) {
        b.mats[uz(m)] = gf::matmul(t.comps[uz(g.dst(m))], gf::matmul(a.mats[uz(m)], *gf::inverse(t.comps[uz(g.src(m))])));
    }
    t.tgt = b;
    return {b, t};
}

}  // namespace ldtt::gpd
