#include "lpweak/whitney_cz.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <deque>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "lpweak/bumps.hpp"
#include "json.hpp"

namespace lpweak {

namespace {

int max_level(const Grid& g) {
  int l = 0;
  while ((g.samples >> l) > 1) ++l;
  return l;  // 2^l == samples
}

std::vector<std::vector<int>> graded_exponents(int dim, int degree) {
  std::vector<std::vector<int>> out;
  for (int total = 0; total <= degree; ++total) {
    if (dim == 1) {
      out.push_back({total});
    } else {
      for (int a = total; a >= 0; --a) out.push_back({a, total - a});
    }
  }
  return out;
}

// offset of cell center from a reference coordinate, wrapped to the nearest
// periodic representative
double wrapped_offset(const Grid& g, long cell_axis_index, double ref) {
  double d = g.coord(static_cast<std::size_t>(cell_axis_index)) - ref;
  while (d > 0.5 * g.length) d -= g.length;
  while (d < -0.5 * g.length) d += g.length;
  return d;
}

struct WeightedLsq {
  std::vector<cplx> coeffs;
  double condition = 0.0;
};

WeightedLsq project_weighted(const Grid& g, const GridFunction& f,
                             const std::vector<std::size_t>& cells,
                             const std::vector<double>& weights,
                             const std::vector<double>& center, double scale,
                             const std::vector<std::vector<int>>& exps) {
  const std::size_t rows = cells.size();
  const std::size_t cols = exps.size();
  Eigen::MatrixXd A(rows, cols);
  Eigen::VectorXd rhs_re(rows), rhs_im(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    const double sw = std::sqrt(weights[i]);
    const double ux = wrapped_offset(g, static_cast<long>(g.axis_x(cells[i])), center[0]) / scale;
    const double uy =
        g.dim == 2 ? wrapped_offset(g, static_cast<long>(g.axis_y(cells[i])), center[1]) / scale
                   : 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      double m = 1.0;
      for (int k = 0; k < exps[c][0]; ++k) m *= ux;
      if (g.dim == 2)
        for (int k = 0; k < exps[c][1]; ++k) m *= uy;
      A(i, c) = sw * m;
    }
    rhs_re(i) = sw * f[cells[i]].real();
    rhs_im(i) = sw * f[cells[i]].imag();
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  Eigen::VectorXd sol_re = qr.solve(rhs_re);
  Eigen::VectorXd sol_im = qr.solve(rhs_im);

  WeightedLsq out;
  out.coeffs.resize(cols);
  for (std::size_t c = 0; c < cols; ++c) out.coeffs[c] = cplx{sol_re(c), sol_im(c)};
  const auto& R = qr.matrixR();
  double dmax = 0.0, dmin = std::numeric_limits<double>::infinity();
  const auto rank_bound = std::min<std::size_t>(cols, rows);
  for (std::size_t c = 0; c < rank_bound; ++c) {
    const double d = std::abs(R(c, c));
    dmax = std::max(dmax, d);
    if (d > 0.0) dmin = std::min(dmin, d);
  }
  out.condition = (dmin > 0.0 && std::isfinite(dmin)) ? dmax / dmin
                                                      : std::numeric_limits<double>::infinity();
  if (qr.rank() < static_cast<Eigen::Index>(cols))
    out.condition = std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace

std::vector<std::uint8_t> threshold_mask(const GridFunction& field, double alpha) {
  std::vector<std::uint8_t> mask(field.size(), 0);
  for (std::size_t i = 0; i < field.size(); ++i)
    mask[i] = field[i].real() > alpha ? 1 : 0;
  return mask;
}

std::vector<long> chebyshev_distance_to_complement(const Grid& grid,
                                                   const std::vector<std::uint8_t>& mask) {
  const std::size_t n = grid.cell_count();
  if (mask.size() != n)
    throw std::invalid_argument("chebyshev_distance: mask size mismatch");
  std::vector<long> dist(n, -1);
  std::deque<std::size_t> frontier;
  for (std::size_t i = 0; i < n; ++i)
    if (!mask[i]) {
      dist[i] = 0;
      frontier.push_back(i);
    }
  if (frontier.empty())
    throw std::domain_error("whitney: mask covers the whole domain (no exterior)");

  const long s = static_cast<long>(grid.samples);
  auto push = [&](std::size_t from, long nx, long ny) {
    nx = ((nx % s) + s) % s;
    ny = ((ny % s) + s) % s;
    const std::size_t idx = grid.index_of(static_cast<std::size_t>(nx),
                                          static_cast<std::size_t>(ny));
    if (dist[idx] < 0) {
      dist[idx] = dist[from] + 1;
      frontier.push_back(idx);
    }
  };
  while (!frontier.empty()) {
    const std::size_t cur = frontier.front();
    frontier.pop_front();
    const long cx = static_cast<long>(grid.axis_x(cur));
    const long cy = static_cast<long>(grid.axis_y(cur));
    if (grid.dim == 1) {
      push(cur, cx - 1, 0);
      push(cur, cx + 1, 0);
    } else {
      for (long dy = -1; dy <= 1; ++dy)
        for (long dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          push(cur, cx + dx, cy + dy);
        }
    }
  }
  return dist;
}

double cube_diameter(const Grid& grid, const DyadicCube& cube) {
  return (static_cast<double>(cube.side_cells(grid)) - 0.5) * grid.spacing;
}

double cube_distance_to_complement(const Grid& grid, const std::vector<long>& dist,
                                   const DyadicCube& cube) {
  const long b = cube.side_cells(grid);
  long best = std::numeric_limits<long>::max();
  const long x0 = cube.first_cell(grid, 0);
  if (grid.dim == 1) {
    for (long dx = 0; dx < b; ++dx)
      best = std::min(best, dist[static_cast<std::size_t>(x0 + dx)]);
  } else {
    const long y0 = cube.first_cell(grid, 1);
    for (long dy = 0; dy < b; ++dy)
      for (long dx = 0; dx < b; ++dx)
        best = std::min(best, dist[grid.index_of(static_cast<std::size_t>(x0 + dx),
                                                 static_cast<std::size_t>(y0 + dy))]);
  }
  return static_cast<double>(best) * grid.spacing;
}

std::vector<DyadicCube> whitney_decompose(const Grid& grid,
                                          const std::vector<std::uint8_t>& mask) {
  const std::size_t n = grid.cell_count();
  if (mask.size() != n) throw std::invalid_argument("whitney_decompose: mask size mismatch");
  bool any = false;
  for (auto m : mask)
    if (m) {
      any = true;
      break;
    }
  if (!any) return {};

  const auto dist = chebyshev_distance_to_complement(grid, mask);
  const int lmax = max_level(grid);

  // pyramid of (all cells inside, min distance) per dyadic block
  std::vector<std::vector<std::uint8_t>> all_in(lmax + 1);
  std::vector<std::vector<long>> min_dt(lmax + 1);
  {
    all_in[lmax].assign(n, 0);
    min_dt[lmax].assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      all_in[lmax][i] = mask[i];
      min_dt[lmax][i] = dist[i];
    }
  }
  for (int l = lmax - 1; l >= 0; --l) {
    const std::size_t blocks = std::size_t(1) << l;
    const std::size_t count = grid.dim == 1 ? blocks : blocks * blocks;
    all_in[l].assign(count, 1);
    min_dt[l].assign(count, std::numeric_limits<long>::max());
    const std::size_t child_blocks = blocks * 2;
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t bx = grid.dim == 1 ? i : i % blocks;
      const std::size_t by = grid.dim == 1 ? 0 : i / blocks;
      for (std::size_t cy = 0; cy < (grid.dim == 1 ? 1u : 2u); ++cy)
        for (std::size_t cx = 0; cx < 2u; ++cx) {
          const std::size_t ci = grid.dim == 1
                                     ? 2 * bx + cx
                                     : (2 * by + cy) * child_blocks + (2 * bx + cx);
          all_in[l][i] &= all_in[l + 1][ci];
          min_dt[l][i] = std::min(min_dt[l][i], min_dt[l + 1][ci]);
        }
    }
  }

  std::vector<DyadicCube> cubes;
  // depth-first selection of maximal blocks with side <= min distance
  struct Node {
    int level;
    long bx, by;
  };
  std::vector<Node> stack{{0, 0, 0}};
  while (!stack.empty()) {
    const Node nd = stack.back();
    stack.pop_back();
    const std::size_t blocks = std::size_t(1) << nd.level;
    const std::size_t idx = grid.dim == 1
                                ? static_cast<std::size_t>(nd.bx)
                                : static_cast<std::size_t>(nd.by) * blocks +
                                      static_cast<std::size_t>(nd.bx);
    const long side = static_cast<long>(grid.samples) >> nd.level;
    if (all_in[nd.level][idx] && min_dt[nd.level][idx] >= side) {
      DyadicCube c;
      c.level = nd.level;
      c.coords = grid.dim == 1 ? std::vector<long>{nd.bx} : std::vector<long>{nd.bx, nd.by};
      cubes.push_back(std::move(c));
      continue;
    }
    if (nd.level == lmax) continue;  // single cell outside the mask
    for (long cy = 0; cy < (grid.dim == 1 ? 1 : 2); ++cy)
      for (long cx = 0; cx < 2; ++cx)
        stack.push_back(Node{nd.level + 1, 2 * nd.bx + cx, 2 * nd.by + cy});
  }
  return cubes;
}

std::vector<int> dilated_overlap_counts(const Grid& grid,
                                        const std::vector<DyadicCube>& cubes,
                                        double factor) {
  std::vector<int> counts(grid.cell_count(), 0);
  const long s = static_cast<long>(grid.samples);
  for (const auto& cube : cubes) {
    const double half = 0.5 * factor * cube.side(grid);
    const long reach = static_cast<long>(std::floor(half / grid.spacing + 0.5)) + 1;
    const long b = cube.side_cells(grid);
    const long x0 = cube.first_cell(grid, 0);
    const double cx = cube.center(grid, 0);
    auto covered_axis = [&](long cell, double c) {
      double d = std::abs(wrapped_offset(grid, ((cell % s) + s) % s, c));
      return d <= half;
    };
    if (grid.dim == 1) {
      for (long i = x0 - reach; i < x0 + b + reach; ++i) {
        if (!covered_axis(i, cx)) continue;
        counts[static_cast<std::size_t>(((i % s) + s) % s)] += 1;
      }
    } else {
      const long y0 = cube.first_cell(grid, 1);
      const double cy = cube.center(grid, 1);
      for (long j = y0 - reach; j < y0 + b + reach; ++j) {
        if (!covered_axis(j, cy)) continue;
        for (long i = x0 - reach; i < x0 + b + reach; ++i) {
          if (!covered_axis(i, cx)) continue;
          counts[grid.index_of(static_cast<std::size_t>(((i % s) + s) % s),
                               static_cast<std::size_t>(((j % s) + s) % s))] += 1;
        }
      }
    }
  }
  return counts;
}

GridFunction PartitionBump::to_grid_function(const Grid& grid) const {
  GridFunction out(grid, Tag::physical);
  for (std::size_t k = 0; k < cells.size(); ++k) out[cells[k]] = values[k];
  return out;
}

std::vector<PartitionBump> partition_of_unity(const Grid& grid,
                                              const std::vector<DyadicCube>& cubes,
                                              const std::vector<std::uint8_t>& mask,
                                              double a, double b) {
  if (!(1.0 < b && b < a))
    throw std::invalid_argument("partition_of_unity: need 1 < b < a");
  const long s = static_cast<long>(grid.samples);

  std::vector<PartitionBump> bumps;
  bumps.reserve(cubes.size());
  std::vector<double> total(grid.cell_count(), 0.0);

  for (const auto& cube : cubes) {
    PartitionBump pb;
    pb.cube = cube;
    const double side = cube.side(grid);
    const double half_support = 0.5 * b * side;
    const long reach =
        static_cast<long>(std::floor(half_support / grid.spacing + 0.5)) + 1;
    const long bc = cube.side_cells(grid);
    const long x0 = cube.first_cell(grid, 0);
    const double cx = cube.center(grid, 0);
    auto bump_axis = [&](long cell, double c) {
      const double u = std::abs(wrapped_offset(grid, ((cell % s) + s) % s, c)) / side;
      return smooth_step_down(u, 0.5, 0.5 * b, 1.0);
    };
    if (grid.dim == 1) {
      for (long i = x0 - reach; i < x0 + bc + reach; ++i) {
        const double v = bump_axis(i, cx);
        if (v <= 0.0) continue;
        pb.cells.push_back(static_cast<std::size_t>(((i % s) + s) % s));
        pb.values.push_back(v);
      }
    } else {
      const long y0 = cube.first_cell(grid, 1);
      const double cy = cube.center(grid, 1);
      for (long j = y0 - reach; j < y0 + bc + reach; ++j) {
        const double vy = bump_axis(j, cy);
        if (vy <= 0.0) continue;
        for (long i = x0 - reach; i < x0 + bc + reach; ++i) {
          const double vx = bump_axis(i, cx);
          if (vx <= 0.0) continue;
          pb.cells.push_back(grid.index_of(static_cast<std::size_t>(((i % s) + s) % s),
                                           static_cast<std::size_t>(((j % s) + s) % s)));
          pb.values.push_back(vx * vy);
        }
      }
    }
    for (std::size_t k = 0; k < pb.cells.size(); ++k) total[pb.cells[k]] += pb.values[k];
    bumps.push_back(std::move(pb));
  }

  for (auto& pb : bumps) {
    std::vector<std::size_t> cells;
    std::vector<double> values;
    for (std::size_t k = 0; k < pb.cells.size(); ++k) {
      const std::size_t cell = pb.cells[k];
      if (!mask[cell]) continue;  // supports stay inside the open set
      cells.push_back(cell);
      values.push_back(pb.values[k] / total[cell]);
    }
    pb.cells = std::move(cells);
    pb.values = std::move(values);
  }
  return bumps;
}

cplx PolyProjection::evaluate(const std::vector<double>& x) const {
  cplx acc{0.0, 0.0};
  for (std::size_t c = 0; c < coeffs.size(); ++c) {
    double m = 1.0;
    for (std::size_t a = 0; a < center.size(); ++a) {
      const double u = (x[a] - center[a]) / scale;
      for (int k = 0; k < exponents[c][a]; ++k) m *= u;
    }
    acc += coeffs[c] * m;
  }
  return acc;
}

PolyProjection polynomial_projection(const GridFunction& f, const GridFunction& weight,
                                     const std::vector<double>& center, int N) {
  if (N < 0) throw std::invalid_argument("polynomial_projection: N must be >= 0");
  if (!(f.grid == weight.grid))
    throw std::invalid_argument("polynomial_projection: grid mismatch");
  std::vector<std::size_t> cells;
  std::vector<double> weights;
  for (std::size_t i = 0; i < weight.size(); ++i) {
    const double w = weight[i].real();
    if (w < 0.0) throw std::invalid_argument("polynomial_projection: negative weight");
    if (w > 0.0) {
      cells.push_back(i);
      weights.push_back(w);
    }
  }
  if (cells.empty())
    throw std::invalid_argument("polynomial_projection: weight is identically zero");

  double scale = f.grid.spacing;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    scale = std::max(scale,
                     std::abs(wrapped_offset(f.grid, static_cast<long>(f.grid.axis_x(cells[k])),
                                             center[0])));
    if (f.grid.dim == 2)
      scale = std::max(scale, std::abs(wrapped_offset(
                                  f.grid, static_cast<long>(f.grid.axis_y(cells[k])),
                                  center.at(1))));
  }
  const auto exps = graded_exponents(f.grid.dim, N);
  const auto lsq = project_weighted(f.grid, f, cells, weights, center, scale, exps);
  if (cells.size() < 32 || !(lsq.condition <= 1e12)) {
    throw std::runtime_error(
        "polynomial_projection: degenerate weight (support=" + std::to_string(cells.size()) +
        " cells, gram condition=" + std::to_string(lsq.condition) + ")");
  }
  PolyProjection out;
  out.exponents = exps;
  out.coeffs = lsq.coeffs;
  out.center = center;
  out.scale = scale;
  out.condition = lsq.condition;
  return out;
}

VectorGridFunction CZDecomposition::bad_of_cube(std::size_t j) const {
  const auto& bp = bad.at(j);
  std::vector<GridFunction> comps;
  for (std::size_t k = 0; k < bp.component_values.size(); ++k) {
    GridFunction g(good.grid(), Tag::physical);
    for (std::size_t c = 0; c < bp.cells.size(); ++c)
      g[bp.cells[c]] = bp.component_values[k][c];
    comps.push_back(std::move(g));
  }
  return VectorGridFunction(std::move(comps));
}

VectorGridFunction CZDecomposition::bad_total() const {
  std::vector<GridFunction> comps(good.count(), GridFunction(good.grid(), Tag::physical));
  for (const auto& bp : bad)
    for (std::size_t k = 0; k < bp.component_values.size(); ++k)
      for (std::size_t c = 0; c < bp.cells.size(); ++c)
        comps[k][bp.cells[c]] += bp.component_values[k][c];
  return VectorGridFunction(std::move(comps));
}

CZDecomposition cz_decompose(const VectorGridFunction& F, double alpha, double p, int N,
                             const GridFunction& proxy) {
  if (!(alpha > 0.0)) throw std::invalid_argument("cz_decompose: alpha must be positive");
  const Grid& g = F.grid();
  if (!(proxy.grid == g)) throw std::invalid_argument("cz_decompose: proxy grid mismatch");
  const int required = static_cast<int>(std::ceil(static_cast<double>(g.dim) / p));
  if (N < required)
    throw std::invalid_argument("cz_decompose: degree too small for the target exponent");

  CZDecomposition cz;
  cz.alpha = alpha;
  cz.degree = N;
  cz.mask = threshold_mask(proxy, alpha);
  cz.good = F;

  bool any = false;
  for (auto m : cz.mask)
    if (m) {
      any = true;
      break;
    }
  if (!any) return cz;  // nothing above the height: good part is all of F

  cz.cubes = whitney_decompose(g, cz.mask);
  cz.phis = partition_of_unity(g, cz.cubes, cz.mask, 9.0 / 8.0, 17.0 / 16.0);

  const auto exps = graded_exponents(g.dim, N);
  for (std::size_t j = 0; j < cz.cubes.size(); ++j) {
    const auto& pb = cz.phis[j];
    if (pb.cells.empty()) {
      cz.bad.push_back(BadPart{cz.cubes[j], {}, std::vector<std::vector<cplx>>(F.count())});
      continue;
    }
    std::vector<double> center(g.dim);
    for (int a = 0; a < g.dim; ++a) center[a] = cz.cubes[j].center(g, a);
    const double scale = std::max(cz.cubes[j].side(g), g.spacing);

    BadPart bp;
    bp.cube = cz.cubes[j];
    bp.cells = pb.cells;
    bp.component_values.resize(F.count());
    for (std::size_t k = 0; k < F.count(); ++k) {
      const auto lsq =
          project_weighted(g, F.components[k], pb.cells, pb.values, center, scale, exps);
      PolyProjection pol;
      pol.exponents = exps;
      pol.coeffs = lsq.coeffs;
      pol.center = center;
      pol.scale = scale;
      bp.component_values[k].resize(pb.cells.size());
      std::vector<double> x(g.dim);
      for (std::size_t c = 0; c < pb.cells.size(); ++c) {
        const std::size_t cell = pb.cells[c];
        x[0] = center[0] + wrapped_offset(g, static_cast<long>(g.axis_x(cell)), center[0]);
        if (g.dim == 2)
          x[1] = center[1] + wrapped_offset(g, static_cast<long>(g.axis_y(cell)), center[1]);
        const cplx residual = F.components[k][cell] - pol.evaluate(x);
        bp.component_values[k][c] = residual * pb.values[c];
        cz.good.components[k][cell] -= bp.component_values[k][c];
      }
    }
    cz.bad.push_back(std::move(bp));
  }
  return cz;
}

double split_height(double lambda, double A1, double A2, double p1, double p2) {
  if (!(0.0 < p1 && p1 < p2)) throw std::invalid_argument("split_height: need 0 < p1 < p2");
  if (!(A1 > 0.0 && A2 > 0.0)) throw std::invalid_argument("split_height: constants must be positive");
  if (!(lambda > 0.0)) throw std::invalid_argument("split_height: lambda must be positive");
  const double gamma = std::pow(std::pow(A2, p2) * std::pow(A1, -p1), 1.0 / (p1 - p2));
  return gamma * lambda;
}

std::pair<VectorGridFunction, VectorGridFunction> split_at_height(
    const VectorGridFunction& F, double alpha) {
  if (alpha < 0.0) throw std::invalid_argument("split_at_height: alpha must be >= 0");
  GridFunction mag = F.l2_magnitude();
  std::vector<GridFunction> above, below;
  for (const auto& comp : F.components) {
    GridFunction hi(comp.grid, Tag::physical), lo(comp.grid, Tag::physical);
    for (std::size_t i = 0; i < comp.size(); ++i) {
      if (mag[i].real() > alpha)
        hi[i] = comp[i];
      else
        lo[i] = comp[i];
    }
    above.push_back(std::move(hi));
    below.push_back(std::move(lo));
  }
  return {VectorGridFunction(std::move(above)), VectorGridFunction(std::move(below))};
}

void save_cz_decomposition(const CZDecomposition& cz, const Grid& grid,
                           const std::string& directory) {
  namespace fs = std::filesystem;
  fs::create_directories(directory);

  std::ofstream cubes_csv(fs::path(directory) / "cubes.csv", std::ios::binary);
  cubes_csv << "index,level,coord_x,coord_y\n";
  for (std::size_t j = 0; j < cz.cubes.size(); ++j) {
    const auto& c = cz.cubes[j];
    cubes_csv << j << ',' << c.level << ',' << c.coords[0] << ','
              << (c.coords.size() > 1 ? c.coords[1] : 0) << '\n';
  }

  for (std::size_t k = 0; k < cz.good.count(); ++k)
    save_grid_function(cz.good.components[k],
                       (fs::path(directory) / ("good_" + std::to_string(k) + ".bin")).string());

  for (std::size_t j = 0; j < cz.bad.size(); ++j) {
    std::ofstream os(fs::path(directory) / ("bad_" + std::to_string(j) + ".bin"),
                     std::ios::binary);
    const auto& bp = cz.bad[j];
    const std::uint64_t ncells = bp.cells.size();
    const std::uint64_t ncomp = bp.component_values.size();
    os.write(reinterpret_cast<const char*>(&ncells), sizeof(ncells));
    os.write(reinterpret_cast<const char*>(&ncomp), sizeof(ncomp));
    for (std::uint64_t c : bp.cells) os.write(reinterpret_cast<const char*>(&c), sizeof(c));
    for (const auto& comp : bp.component_values)
      for (const cplx& v : comp) {
        const double re = v.real(), im = v.imag();
        os.write(reinterpret_cast<const char*>(&re), sizeof(re));
        os.write(reinterpret_cast<const char*>(&im), sizeof(im));
      }
  }

  nlohmann::json manifest;
  manifest["alpha"] = cz.alpha;
  manifest["degree"] = cz.degree;
  manifest["cube_count"] = cz.cubes.size();
  manifest["component_count"] = cz.good.count();
  manifest["grid"] = {{"dim", grid.dim}, {"length", grid.length}, {"samples", grid.samples}};
  std::ofstream mf(fs::path(directory) / "manifest.json", std::ios::binary);
  mf << manifest.dump(2) << '\n';
}

}  // namespace lpweak
