#include "dsm/random.hpp"

#include <cmath>

namespace dsm {

Vector gaussian_vector(std::size_t dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector v(dim);
    for (std::size_t i = 0; i < dim; ++i) v[i] = gauss(rng);
    return v;
}

Vector unit_sphere_vector(std::size_t dim, std::mt19937_64& rng) {
    Vector v = gaussian_vector(dim, rng);
    double n = norm(v);
    while (n == 0.0) {  // astronomically unlikely; redraw
        v = gaussian_vector(dim, rng);
        n = norm(v);
    }
    v *= 1.0 / n;
    return v;
}

Vector ball_vector(std::size_t dim, double radius, std::mt19937_64& rng) {
    Vector v = unit_sphere_vector(dim, rng);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double r =
        radius * std::pow(unif(rng), 1.0 / static_cast<double>(dim));
    v *= r;
    return v;
}

}  // namespace dsm
