#pragma once

#include <cstddef>
#include <map>
#include <string>

#include "bhmc/generator.hpp"

namespace bhmc::models {

/// M/M/1 queue as a scalar-phase LD-QBD. Requires 0 < lambda < mu.
BlockGenerator make_mm1(double lambda, double mu);

/// M/M/c queue: Q_{k,k-1} = min(k, c) mu. Requires lambda < c mu.
BlockGenerator make_mmc(double lambda, double mu, std::size_t servers);

/// Scalar level-independent M/G/1-type generator with a k^-3 jump tail:
///
///   A_{-1} = mu,  A_k = tail_c / (k (k+1) (k+2)) for k >= 1,
///   A_0 = -(mu + tail_c / 4),  Q_{0,0} = A_{-1} + A_0.
///
/// Sum_k A_k = tail_c / 4 and Sum_k k A_k = tail_c / 2 telescope exactly, so
/// the row tail mass is closed-form and stability is exactly mu > tail_c / 2.
/// The chain is ergodic but its stationary tail decays like k^-2.
BlockGenerator make_heavy_tail_mg1(double mu, double tail_c);

/// Jump rate A_k of make_heavy_tail_mg1 for k >= 1.
double heavy_tail_jump_rate(double tail_c, std::size_t k);

/// Rates of a reflected nearest-neighbour walk on the quarter plane.
/// Interior moves use the first four; moves out of the x = 0 face use
/// east_x0 / south_x0 and moves out of the y = 0 face use north_y0 / west_y0
/// (the origin uses east_x0 and north_y0).
struct LatticeRates {
    double east = 1.0;
    double west = 2.0;
    double north = 1.0;
    double south = 2.0;
    double east_x0 = 1.0;
    double south_x0 = 2.0;
    double north_y0 = 1.0;
    double west_y0 = 2.0;
};

/// 2-D walk embedded as a BHMC with level x + y and phase x (M_k = k + 1).
/// Positive recurrence is the caller's responsibility; throws BadRates on
/// nonpositive rates.
BlockGenerator make_lattice_rw_2d(const LatticeRates& rates);

/// (level, phase) of lattice point (x, y).
inline std::pair<std::size_t, std::size_t> lattice_state(std::size_t x, std::size_t y) {
    return {x + y, x};
}

enum class ModelId { mm1, mmc, ld_qbd_birth_death, heavy_tail_mg1, lattice_rw_2d };

const char* to_string(ModelId id) noexcept;
ModelId model_id_from_string(const std::string& s);

/// Catalog entry: model id plus named numeric parameters.
///
///   mm1                 lambda, mu
///   mmc                 lambda, mu, c
///   ld_qbd_birth_death  lambda, mu, c   (alias of mmc)
///   heavy_tail_mg1      mu, tail_c
///   lattice_rw_2d       east, west, north, south, east_x0, south_x0, north_y0, west_y0
struct ModelSpec {
    ModelId id = ModelId::mm1;
    std::map<std::string, double> params;
};

BlockGenerator make_model(const ModelSpec& spec);

}  // namespace bhmc::models
