// Regenerates the frozen test-vector files under tests/data/. The files are
// committed; this tool exists so they can be rebuilt if the directory layout
// changes. Output is deterministic.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "ows/core.hpp"

using namespace ows;

namespace {

Params params_for_k(std::uint32_t k) { return Params::for_domain((k + 1) * (k + 1)); }

std::vector<Seed> seeds_for(const Params& p) {
    std::vector<Seed> seeds{0, p.seed_mask(), 0x123456789abcdefull & p.seed_mask(),
                            0x9e3779b97f4a7c15ull & p.seed_mask()};
    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
    return seeds;
}

}  // namespace

int main(int argc, char** argv) {
    const std::string dir = argc > 1 ? argv[1] : "tests/data";

    {
        std::ofstream out(dir + "/prg_vectors.txt");
        if (!out) {
            std::cerr << "cannot open " << dir << "/prg_vectors.txt\n";
            return 1;
        }
        out << "# k seed_hex left_hex right_hex\n";
        for (std::uint32_t k : {2u, 3u, 4u, 5u, 6u, 8u, 16u, 31u}) {
            const Params p = params_for_k(k);
            for (const Seed s : seeds_for(p)) {
                const PrgOutput o = prg_expand(p, s);
                out << k << ' ' << BitString::from_uint(s, k).to_hex() << ' '
                    << BitString::from_uint(o.left, k).to_hex() << ' '
                    << BitString::from_uint(o.right, k).to_hex() << '\n';
            }
        }
    }

    {
        std::ofstream out(dir + "/derive_vectors.txt");
        if (!out) {
            std::cerr << "cannot open " << dir << "/derive_vectors.txt\n";
            return 1;
        }
        out << "# k s_hex i sigma_hex fbit\n";
        for (std::uint32_t k : {2u, 3u, 4u, 5u}) {
            const Params p = params_for_k(k);
            for (const Seed s : seeds_for(p)) {
                for (const std::uint64_t i :
                     {std::uint64_t{0}, p.max_index() / 2, p.max_index()}) {
                    const DerivedExample d = derive_example(p, SeedKey{s}, i);
                    out << k << ' ' << BitString::from_uint(s, k).to_hex() << ' ' << i << ' '
                        << d.sigma.to_hex() << ' ' << int(d.fbit) << '\n';
                }
            }
        }
        const Params p31 = params_for_k(31);
        for (const Seed s : {Seed{0x5eed5eed} & p31.seed_mask(), p31.seed_mask()}) {
            for (const std::uint64_t i : {std::uint64_t{1}, p31.max_index() - 1}) {
                const DerivedExample d = derive_example(p31, SeedKey{s}, i);
                out << 31 << ' ' << BitString::from_uint(s, 31).to_hex() << ' ' << i << ' '
                    << d.sigma.to_hex() << ' ' << int(d.fbit) << '\n';
            }
        }
    }

    std::cout << "vectors written under " << dir << "\n";
    return 0;
}
