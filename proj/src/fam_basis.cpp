#include <algorithm>

#include "ldtt/fam.hpp"

namespace ldtt::fam {

Basis auto_basis(const Model& m, const Ctx& ctx, int set_size, int dim, int variant) {
    Basis b;
    Ctx prefix;
    for (const auto& c : ctx.cart) {
        if (is_large(c.type)) {
            BasisValue v;
            if (c.type.head() == Head::UnivU) {
                v = {BasisValue::Kind::Set, {set_size}};
            } else if (c.type.head() == Head::UnivL) {
                v = {BasisValue::Kind::Vec, {dim}};
            } else {
                // A family A → U or A → L: its domain is enumerated at the first point of the prefix.
                const auto env = m.interp_ctx(prefix, b);
                const auto n = env.points.empty() ? 0 : m.enumerate(env, 0, c.type.kid(0)).size();
                const bool sets = c.type.kid(1).head() == Head::UnivU;
                const int mod = std::max(1, sets ? set_size : dim);
                v.kind = sets ? BasisValue::Kind::Sets : BasisValue::Kind::Vec;
                for (std::size_t i = 0; i < n; ++i) v.sizes.push_back(1 + static_cast<int>((i + static_cast<std::size_t>(variant)) % static_cast<std::size_t>(mod)));
            }
            b[c.name] = v;
        }
        prefix.cart.push_back(c);
    }
    return b;
}

}  // namespace ldtt::fam
