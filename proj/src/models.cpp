#include "bhmc/models.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bhmc/errors.hpp"

namespace bhmc::models {

namespace {

void require_rate(double r, const char* name) {
    if (!(r > 0.0) || !std::isfinite(r))
        throw BadRates(std::string(name) + " must be a positive finite rate");
}

Matrix scalar(double v) { return Matrix(1, 1, v); }

}  // namespace

BlockGenerator make_mm1(double lambda, double mu) {
    require_rate(lambda, "lambda");
    require_rate(mu, "mu");
    if (lambda >= mu) throw UnstableModel("M/M/1 needs lambda < mu");
    auto block = [lambda, mu](std::size_t k, std::size_t l) -> Matrix {
        if (l == k) return scalar(k == 0 ? -lambda : -(lambda + mu));
        if (l == k + 1) return scalar(lambda);
        if (l + 1 == k) return scalar(mu);
        return scalar(0.0);
    };
    return BlockGenerator([](std::size_t) { return std::size_t{1}; }, block, 1, {}, "mm1");
}

BlockGenerator make_mmc(double lambda, double mu, std::size_t servers) {
    require_rate(lambda, "lambda");
    require_rate(mu, "mu");
    if (servers == 0) throw BadRates("M/M/c needs at least one server");
    if (lambda >= static_cast<double>(servers) * mu) throw UnstableModel("M/M/c needs lambda < c mu");
    auto down = [mu, servers](std::size_t k) { return static_cast<double>(std::min(k, servers)) * mu; };
    auto block = [lambda, down](std::size_t k, std::size_t l) -> Matrix {
        if (l == k) return scalar(-(lambda + down(k)));
        if (l == k + 1) return scalar(lambda);
        if (l + 1 == k) return scalar(down(k));
        return scalar(0.0);
    };
    return BlockGenerator([](std::size_t) { return std::size_t{1}; }, block, 1, {}, "mmc");
}

double heavy_tail_jump_rate(double tail_c, std::size_t k) {
    const double x = static_cast<double>(k);
    return tail_c / (x * (x + 1.0) * (x + 2.0));
}

BlockGenerator make_heavy_tail_mg1(double mu, double tail_c) {
    require_rate(mu, "mu");
    require_rate(tail_c, "tail_c");
    // Mean upward drift Sum_k k A_k = tail_c / 2 must be beaten by mu.
    if (!(mu > 0.5 * tail_c)) throw UnstableModel("heavy-tail M/G/1 needs mu > tail_c / 2");
    const double a0 = -(mu + 0.25 * tail_c);
    auto block = [mu, tail_c, a0](std::size_t k, std::size_t l) -> Matrix {
        if (k == 0 && l == 0) return scalar(mu + a0);
        if (l + 1 == k) return scalar(mu);
        if (l == k) return scalar(a0);
        if (l > k) return scalar(heavy_tail_jump_rate(tail_c, l - k));
        return scalar(0.0);
    };
    // Sum_{j > m} 1/(j(j+1)(j+2)) = 1 / (2 (m+1)(m+2)).
    auto tail = [mu, tail_c](std::size_t k, std::size_t, std::size_t L) -> double {
        if (L >= k) {
            const double m = static_cast<double>(L - k);
            return tail_c / (2.0 * (m + 1.0) * (m + 2.0));
        }
        if (L + 1 == k) return -mu;  // A_0 plus all upward jumps
        return 0.0;                  // whole row
    };
    return BlockGenerator([](std::size_t) { return std::size_t{1}; }, block, std::nullopt, tail,
                          "heavy_tail_mg1");
}

BlockGenerator make_lattice_rw_2d(const LatticeRates& r) {
    require_rate(r.east, "east");
    require_rate(r.west, "west");
    require_rate(r.north, "north");
    require_rate(r.south, "south");
    require_rate(r.east_x0, "east_x0");
    require_rate(r.south_x0, "south_x0");
    require_rate(r.north_y0, "north_y0");
    require_rate(r.west_y0, "west_y0");

    struct Moves {
        double east, west, north, south;
    };
    auto moves = [r](std::size_t x, std::size_t y) -> Moves {
        Moves m{};
        m.east = x == 0 ? r.east_x0 : r.east;
        m.north = y == 0 ? r.north_y0 : r.north;
        m.west = x == 0 ? 0.0 : (y == 0 ? r.west_y0 : r.west);
        m.south = y == 0 ? 0.0 : (x == 0 ? r.south_x0 : r.south);
        return m;
    };
    auto block = [moves](std::size_t k, std::size_t l) -> Matrix {
        Matrix b(k + 1, l + 1);
        for (std::size_t x = 0; x <= k; ++x) {
            const std::size_t y = k - x;
            const Moves m = moves(x, y);
            if (l == k) {
                b(x, x) = -(m.east + m.west + m.north + m.south);
            } else if (l == k + 1) {
                b(x, x + 1) += m.east;
                b(x, x) += m.north;
            } else if (l + 1 == k) {
                if (x > 0) b(x, x - 1) += m.west;
                if (y > 0) b(x, x) += m.south;
            }
        }
        return b;
    };
    return BlockGenerator([](std::size_t k) { return k + 1; }, block, 1, {}, "lattice_rw_2d");
}

const char* to_string(ModelId id) noexcept {
    switch (id) {
        case ModelId::mm1: return "mm1";
        case ModelId::mmc: return "mmc";
        case ModelId::ld_qbd_birth_death: return "ld_qbd_birth_death";
        case ModelId::heavy_tail_mg1: return "heavy_tail_mg1";
        case ModelId::lattice_rw_2d: return "lattice_rw_2d";
    }
    return "unknown";
}

ModelId model_id_from_string(const std::string& s) {
    for (ModelId id : {ModelId::mm1, ModelId::mmc, ModelId::ld_qbd_birth_death,
                       ModelId::heavy_tail_mg1, ModelId::lattice_rw_2d})
        if (s == to_string(id)) return id;
    throw ConfigError("unknown model '" + s + "'");
}

namespace {

double param(const ModelSpec& spec, const std::string& key) {
    auto it = spec.params.find(key);
    if (it == spec.params.end())
        throw ConfigError(std::string("model ") + to_string(spec.id) + " needs parameter '" + key + "'");
    return it->second;
}

double param_or(const ModelSpec& spec, const std::string& key, double fallback) {
    auto it = spec.params.find(key);
    return it == spec.params.end() ? fallback : it->second;
}

}  // namespace

BlockGenerator make_model(const ModelSpec& spec) {
    switch (spec.id) {
        case ModelId::mm1:
            return make_mm1(param(spec, "lambda"), param(spec, "mu"));
        case ModelId::mmc:
        case ModelId::ld_qbd_birth_death: {
            const double c = param(spec, "c");
            if (c < 1.0 || c != std::floor(c)) throw ConfigError("c must be a positive integer");
            return make_mmc(param(spec, "lambda"), param(spec, "mu"), static_cast<std::size_t>(c));
        }
        case ModelId::heavy_tail_mg1:
            return make_heavy_tail_mg1(param(spec, "mu"), param_or(spec, "tail_c", 1.0));
        case ModelId::lattice_rw_2d: {
            LatticeRates r;
            r.east = param_or(spec, "east", r.east);
            r.west = param_or(spec, "west", r.west);
            r.north = param_or(spec, "north", r.north);
            r.south = param_or(spec, "south", r.south);
            r.east_x0 = param_or(spec, "east_x0", r.east_x0);
            r.south_x0 = param_or(spec, "south_x0", r.south_x0);
            r.north_y0 = param_or(spec, "north_y0", r.north_y0);
            r.west_y0 = param_or(spec, "west_y0", r.west_y0);
            return make_lattice_rw_2d(r);
        }
    }
    throw ConfigError("unhandled model id");
}

}  // namespace bhmc::models
