// Screens the two bundled reference pairs and an LU-rotated copy of a
// random state, printing the first separating invariant for each.

#include "luinv/equivalence.hpp"
#include "luinv/random.hpp"
#include "luinv/reference_states.hpp"

#include <iostream>

int main() {
    using namespace luinv;

    auto show = [](const char* label, const DensityMatrix& a, const DensityMatrix& b) {
        const auto report = screen(a, b);
        std::cout << label << ": " << verdict_name(report.verdict);
        if (report.witness)
            std::cout << " via " << report.witness->name << " (" << report.witness->a.real() << " vs "
                      << report.witness->b.real() << ")";
        std::cout << "\n";
    };

    show("rho1 vs rho2", reference::rho1(), reference::rho2());
    show("sigma1 vs sigma2", reference::sigma1(), reference::sigma2());

    const auto rho = random_density({2, 3}, 3, 2024);
    const auto rotated = apply_local_unitary_density(rho, random_local_unitaries(rho.dims(), 7));
    show("random rho vs (u1 x u2) rho (u1 x u2)^dag", rho, rotated);
}
