#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

namespace ldtt {

// A random linear term over the zone u0 : A, ..., u(n-1) : A (plus z : Zero sometimes) whose
// acceptance is predicted from occurrence counts alone: accepted iff no slot occurs twice and
// every slot occurs once unless some ⊤ / absurd slack is present.
struct LinCase {
    std::vector<std::string> zone;  // "u0 : A" entries, in declaration order
    std::string term;
    std::string type;
    bool expected = false;

    std::string source(const std::vector<std::string>& order) const {
        std::string s = "check (A : L) (X : U) (c : X) ( ;";
        for (const auto& z : order) s += "  " + z;
        return s + ") " + term + " : " + type + ";";
    }
    std::string source() const { return source(zone); }
};

class LinGen {
public:
    explicit LinGen(std::uint64_t seed) : rng_(seed) {}

    LinCase next() {
        fresh_ = 0;
        LinCase c;
        const int n = pick(1, 4);
        const bool with_zero = pick(0, 5) == 0;
        std::vector<int> counts;
        std::vector<Node> pieces;
        for (int i = 0; i < n + (with_zero ? 1 : 0); ++i) {
            const bool zero = i == n;
            const std::string name = zero ? "z" : "u" + std::to_string(i);
            c.zone.push_back(name + (zero ? " : Zero" : " : A"));
            const int r = pick(0, 9);
            const int k = r < 8 ? 1 : r == 8 ? 0 : 2;
            counts.push_back(k);
            for (int j = 0; j < k; ++j) pieces.push_back(zero ? Node{"absurd z", "Top", true} : Node{name, "A", false});
        }
        if (pick(0, 3) == 0) pieces.push_back({"top", "Top", true});
        if (pieces.empty()) pieces.push_back({"unit", "Unit", false});
        std::shuffle(pieces.begin(), pieces.end(), rng_);

        bool slack = false;
        for (const auto& p : pieces) slack = slack || p.slack;
        while (pieces.size() > 1) {
            const auto i = static_cast<std::size_t>(pick(0, static_cast<int>(pieces.size()) - 2));
            Node joined = tensor(wrap(pieces[i]), wrap(pieces[i + 1]));
            pieces.erase(pieces.begin() + static_cast<long>(i), pieces.begin() + static_cast<long>(i) + 2);
            pieces.insert(pieces.begin() + static_cast<long>(i), joined);
        }
        const Node root = wrap(pieces[0]);
        c.term = root.text;
        c.type = root.type;
        const bool no_dup = std::all_of(counts.begin(), counts.end(), [](int k) { return k <= 1; });
        const bool all_once = std::all_of(counts.begin(), counts.end(), [](int k) { return k == 1; });
        c.expected = no_dup && (all_once || slack);
        return c;
    }

    // A permutation of the zone other than the identity when there is more than one entry.
    std::vector<std::string> permuted(const std::vector<std::string>& zone) {
        auto out = zone;
        if (out.size() < 2) return out;
        while (out == zone) std::shuffle(out.begin(), out.end(), rng_);
        return out;
    }

private:
    struct Node {
        std::string text;
        std::string type;
        bool slack = false;
    };

    std::mt19937_64 rng_;
    int fresh_ = 0;

    int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    std::string name(const char* stem) { return stem + std::to_string(fresh_++); }

    static Node tensor(const Node& a, const Node& b) {
        return {"(" + a.text + ") ** (" + b.text + ")", "(" + a.type + ") * (" + b.type + ")", a.slack || b.slack};
    }

    // (lfun (w : T). w) @ e: puts e in checking position at T.
    std::string annot(const std::string& e, const std::string& type) {
        const auto w = name("w");
        return "(lfun (" + w + " : " + type + "). " + w + ") @ (" + e + ")";
    }

    // Usage-preserving wrappers exercising ⊸, &, ⊗-E, I-E, ⊓, L-E and ⊏.
    Node wrap(Node t) {
        for (int depth = 0; depth < 2 && pick(0, 2) == 0; ++depth) {
            switch (pick(0, 6)) {
                case 0: t.text = annot(t.text, t.type); break;
                case 1: t.text = "fst (" + annot("<" + t.text + ", " + t.text + ">", "(" + t.type + ") & (" + t.type + ")") + ")"; break;
                case 2: {
                    const auto a = name("a"), b = name("b");
                    const std::string pair = annot("(" + t.text + ") ** unit", "(" + t.type + ") * Unit");
                    t = Node{"let " + a + " ** " + b + " be " + pair + " in " + b + " ** " + a, "Unit * (" + t.type + ")", t.slack};
                    break;
                }
                case 3: t.text = "let unit be unit in " + t.text; break;
                case 4:
                    t.text = "(" + annot("cfun (" + name("x") + " : X). " + t.text, "cap (xx : X). " + t.type) + ") [c]";
                    break;
                case 5: t.text = "let " + name("x") + " be lift c in " + t.text; break;
                default: {
                    const auto s = name("s"), x = name("x"), y = name("y");
                    t.text = "(lfun (" + s + " : sub (xx : X). " + t.type + "). let " + x + ", " + y + " be " + s +
                             " in " + y + ") @ {c, " + t.text + "}";
                    break;
                }
            }
        }
        return t;
    }
};

}  // namespace ldtt
