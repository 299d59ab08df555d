// Regenerates the bundled synthetic datasets in data/.
#include "vqt/io.hpp"
#include "vqt/thermo.hpp"

#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
    const std::string dir = argc > 1 ? argv[1] : "data";
    using namespace vqt;
    const model::DimerModel m{5.0, 2.0};
    const auto temps = thermo::log_grid(2.0, 100.0, 30);
    const struct {
        thermo::Quantity q;
        const char* file;
        std::uint64_t seed;
    } sets[] = {{thermo::Quantity::chi_reduced_times_T, "synthetic_chi_T_J5K.csv", 5},
                {thermo::Quantity::specific_heat, "synthetic_specific_heat_J5K.csv", 6}};
    try {
        for (const auto& s : sets) {
            const auto ds = thermo::synthetic_dataset(
                m, s.q, temps, 0.02, s.seed,
                "SYNTHETIC: closed-form dimer model, J = 5 K, g = 2, 2% Gaussian noise, seed " +
                    std::to_string(s.seed) + " (not measured data)");
            std::ostringstream out;
            io::write_dataset(out, ds);
            io::write_text(dir + "/" + s.file, out.str());
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
