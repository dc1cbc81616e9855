#include "equiaff/blaschke.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace equiaff {

Ten3 make_ten3(int n) {
  return Ten3(n, std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0)));
}
Ten4 make_ten4(int n) { return Ten4(n, make_ten3(n)); }

double StructureResiduals::max_structural() const {
  double m = 0.0;
  for (double r : {apolarity, symmetry_fp, symmetry_shape, frame_metric, frame_volume,
                   weingarten_normal, cross_route, codazzi, contracted_codazzi, gauss,
                   gauss_frame, chi_identity})
    m = std::max(m, r);
  return m;
}

namespace {

// Pick the unit row e_p that makes [x_1; ...; x_n; e_p] best conditioned,
// judging by the numeric determinant with sup-normalized tangent rows.
int best_closing_row(const std::vector<std::vector<double>>& rows, int amb) {
  int n = amb - 1;
  std::vector<std::vector<double>> unit(n);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (double v : rows[i]) s = std::max(s, std::abs(v));
    if (s == 0.0) throw ImmersionError("tangent vector vanishes; chart is not an immersion");
    unit[i] = rows[i];
    for (double& v : unit[i]) v /= s;
  }
  int best_p = -1;
  double best = 0.0;
  for (int p = 0; p < amb; ++p) {
    Matrix<double> t(amb, amb, 0.0);
    for (int i = 0; i < n; ++i)
      for (int q = 0; q < amb; ++q) t(i, q) = unit[i][q];
    t(n, p) = 1.0;
    double d = 0.0;
    try {
      d = std::abs(det(t));
    } catch (const SingularMatrix&) {
      continue;
    }
    if (d > best) {
      best = d;
      best_p = p;
    }
  }
  if (best_p < 0 || best < 1e-10)
    throw ImmersionError("tangent vectors are numerically dependent; chart is not an immersion");
  return best_p;
}

double max_abs(const Ten3& t) {
  double m = 0.0;
  for (const auto& a : t)
    for (const auto& b : a)
      for (double v : b) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

std::vector<RJet> cofactor_functional(const std::vector<std::vector<RJet>>& tangent_rows) {
  int n = static_cast<int>(tangent_rows.size());
  int amb = n + 1;
  std::vector<std::vector<double>> values(n, std::vector<double>(amb));
  for (int i = 0; i < n; ++i)
    for (int q = 0; q < amb; ++q) values[i][q] = tangent_rows[i][q].value();
  int close_p = best_closing_row(values, amb);

  auto ctx = tangent_rows[0][0].context();
  Matrix<RJet> t(amb, amb, RJet(ctx));
  for (int i = 0; i < n; ++i)
    for (int q = 0; q < amb; ++q) t(i, q) = tangent_rows[i][q];
  t(n, close_p) = RJet(ctx, 1.0);

  // det(x_1,..,x_n,y) = sum_q c_q y_q with c_q the cofactors of the closing
  // row; c = det(T) * (T^{-1} e_{n+1}) since the cofactors do not depend on
  // the closing row itself.
  LuFactorization<RJet> lu(std::move(t));
  RJet dt = lu.det();
  std::vector<RJet> rhs(amb, RJet(ctx));
  rhs[amb - 1] = RJet(ctx, 1.0);
  std::vector<RJet> w = lu.solve_vec(rhs);
  std::vector<RJet> c(amb, RJet(ctx));
  for (int q = 0; q < amb; ++q) c[q] = dt * w[q];
  return c;
}

PointInvariants invariants_from_jets(std::span<const RJet> x_jets, std::span<const double> u) {
  int amb = static_cast<int>(x_jets.size());
  int n = amb - 1;
  if (n < 1) throw GeometryError("hypersurface dimension must be at least 1");
  if (x_jets[0].n_vars() != n)
    throw GeometryError("jet variable count must be one less than the ambient dimension");
  if (x_jets[0].degree() < 4)
    throw GeometryError("degree-4 jets of the position map are required");

  PointInvariants inv;
  inv.n = n;
  inv.u.assign(u.begin(), u.end());
  inv.x.resize(amb);
  for (int q = 0; q < amb; ++q) inv.x[q] = x_jets[q].value();

  // First and second derivative jets of the position map.
  std::vector<std::vector<RJet>> xd(n);  // xd[i][q], degree 3
  for (int i = 0; i < n; ++i) {
    xd[i].reserve(amb);
    for (int q = 0; q < amb; ++q) xd[i].push_back(x_jets[q].derivative(i));
  }
  std::vector<std::vector<std::vector<RJet>>> xdd(n);  // xdd[i][j][q], degree 2
  for (int i = 0; i < n; ++i) {
    xdd[i].resize(n);
    for (int j = 0; j <= i; ++j) {
      xdd[i][j].reserve(amb);
      for (int q = 0; q < amb; ++q) xdd[i][j].push_back(xd[i][q].derivative(j));
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) xdd[i][j] = xdd[j][i];

  // Cofactor functional at degree 2 (all h derivatives we need live there).
  std::vector<std::vector<RJet>> rows2(n);
  for (int i = 0; i < n; ++i) {
    rows2[i].reserve(amb);
    for (int q = 0; q < amb; ++q) rows2[i].push_back(xd[i][q].truncated(2));
  }
  std::vector<RJet> cof = cofactor_functional(rows2);

  auto ctx2 = cof[0].context();
  Matrix<RJet> hj(n, n, RJet(ctx2));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      RJet acc(ctx2);
      for (int q = 0; q < amb; ++q) acc = acc + cof[q] * xdd[i][j][q];
      hj(i, j) = acc;
      if (j != i) hj(j, i) = acc;
    }

  // Orientation: flip the transversal so h is positive definite.
  Matrix<double> h0(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) h0(i, j) = hj(i, j).value();
  double h_scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) h_scale = std::max(h_scale, std::abs(h0(i, j)));
  if (h_scale < 1e-250 || std::abs(det(h0)) < std::pow(1e-12 * std::max(h_scale, 1e-30), n))
    throw DegenerateHypersurface("det of the second-derivative form vanishes");
  bool flip = false;
  if (!is_positive_definite(h0)) {
    Matrix<double> mh = h0;
    mh.scale(-1.0);
    if (!is_positive_definite(mh))
      throw NotConvex("the second-derivative form is indefinite or degenerate here");
    flip = true;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        hj(i, j) = -hj(i, j);
        h0(i, j) = -h0(i, j);
      }
  }
  (void)flip;

  RJet Hj = det(hj);
  if (!(Hj.value() > 1e-300))
    throw DegenerateHypersurface("det of the second-derivative form vanishes");
  inv.H = Hj.value();
  inv.h = h0;

  // Equiaffine metric g = H^{-1/(n+2)} h and its inverse, as degree-2 jets.
  RJet Hpow = jet_pow_real(Hj, -1.0 / (n + 2));
  Matrix<RJet> gj(n, n, RJet(ctx2));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gj(i, j) = Hpow * hj(i, j);
  Matrix<RJet> gj_inv = inverse(gj);

  inv.g = Matrix<double>(n, n);
  inv.g_inv = Matrix<double>(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      inv.g(i, j) = gj(i, j).value();
      inv.g_inv(i, j) = gj_inv(i, j).value();
    }

  // Levi-Civita connection of g, degree-1 jets.
  auto ctx1 = JetContext::get(n, 1);
  std::vector<std::vector<std::vector<RJet>>> dg(n);  // dg[l][i][j] = d_l g_ij, degree 1
  for (int l = 0; l < n; ++l) {
    dg[l].assign(n, std::vector<RJet>(n, RJet(ctx1)));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) dg[l][i][j] = gj(i, j).derivative(l);
  }
  std::vector<std::vector<std::vector<RJet>>> gam_hat(n);  // [k][i][j], degree 1
  for (int k = 0; k < n; ++k) {
    gam_hat[k].assign(n, std::vector<RJet>(n, RJet(ctx1)));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) {
        RJet acc(ctx1);
        for (int l = 0; l < n; ++l)
          acc = acc + gj_inv(k, l) * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);
        acc *= 0.5;
        gam_hat[k][i][j] = acc;
        if (j != i) gam_hat[k][j][i] = acc;
      }
  }

  // Affine normal xi = (1/n) g^ij (x_ij - Gammahat^k_ij x_k), degree-1 jets.
  std::vector<RJet> xij(amb, RJet(ctx1));
  for (int q = 0; q < amb; ++q) {
    RJet acc(ctx1);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        RJet term = xdd[i][j][q];
        for (int k = 0; k < n; ++k) term = term - gam_hat[k][i][j] * xd[k][q];
        acc = acc + gj_inv(i, j) * term;
      }
    acc *= 1.0 / n;
    xij[q] = acc;
  }
  inv.xi.resize(amb);
  for (int q = 0; q < amb; ++q) inv.xi[q] = xij[q].value();

  // Moving frame [x_1 .. x_n xi]; solving it against x_ij yields the induced
  // connection and (as a consistency output) the metric again.
  Matrix<RJet> frame(amb, amb, RJet(ctx1));
  for (int q = 0; q < amb; ++q) {
    for (int i = 0; i < n; ++i) frame(q, i) = xd[i][q].truncated(1);
    frame(q, n) = xij[q];
  }
  std::unique_ptr<LuFactorization<RJet>> frame_lu;
  try {
    frame_lu = std::make_unique<LuFactorization<RJet>>(frame);
  } catch (const SingularMatrix&) {
    throw TangentialNormal("affine normal is tangent to the chart frame");
  }

  std::vector<std::vector<std::vector<RJet>>> gam(n);  // induced connection [k][i][j]
  for (int k = 0; k < n; ++k) gam[k].assign(n, std::vector<RJet>(n, RJet(ctx1)));
  inv.frame_residual = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      std::vector<RJet> rhs(amb, RJet(ctx1));
      for (int q = 0; q < amb; ++q) rhs[q] = xdd[i][j][q].truncated(1);
      std::vector<RJet> coef = frame_lu->solve_vec(rhs);
      for (int k = 0; k < n; ++k) {
        gam[k][i][j] = coef[k];
        if (j != i) gam[k][j][i] = coef[k];
      }
      inv.frame_residual =
          std::max(inv.frame_residual, std::abs(coef[n].value() - gj(i, j).value()));
    }

  // Unimodular-volume consistency: det(x_1..x_n, xi) = sqrt(det g).
  {
    RJet dfr = frame_lu->det();
    double want = std::sqrt(std::abs(det(inv.g)));
    inv.frame_volume_gap = std::abs(std::abs(dfr.value()) - want);
  }

  // Cubic form: difference of the two connections, lowered with g.
  std::vector<std::vector<std::vector<RJet>>> fp_mixed_j(n), fp_low_j(n);
  for (int k = 0; k < n; ++k) {
    fp_mixed_j[k].assign(n, std::vector<RJet>(n, RJet(ctx1)));
    fp_low_j[k] = fp_mixed_j[k];
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) fp_mixed_j[k][i][j] = gam[k][i][j] - gam_hat[k][i][j];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        RJet acc(ctx1);
        for (int l = 0; l < n; ++l) acc = acc + gj(k, l) * fp_mixed_j[l][i][j];
        fp_low_j[i][j][k] = acc;  // A_ijk
      }

  inv.fp = make_ten3(n);
  inv.fp_mixed.assign(n, Matrix<double>(n, n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        inv.fp[i][j][k] = fp_low_j[i][j][k].value();
        inv.fp_mixed[k](i, j) = fp_mixed_j[k][i][j].value();
      }

  inv.christoffel_metric.assign(n, Matrix<double>(n, n, 0.0));
  inv.christoffel_induced.assign(n, Matrix<double>(n, n, 0.0));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        inv.christoffel_metric[k](i, j) = gam_hat[k][i][j].value();
        inv.christoffel_induced[k](i, j) = gam[k][i][j].value();
      }

  // Shape operator from the derivative of the affine normal:
  // d_i xi = -B^k_i x_k + nu_i xi, with nu expected to vanish.
  Matrix<double> frame0(amb, amb);
  for (int q = 0; q < amb; ++q)
    for (int p = 0; p < amb; ++p) frame0(q, p) = frame(q, p).value();
  LuFactorization<double> frame0_lu(std::move(frame0));
  inv.shape = Matrix<double>(n, n, 0.0);
  inv.weingarten_nu.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    std::vector<double> rhs(amb);
    for (int q = 0; q < amb; ++q) rhs[q] = xij[q].derivative(i).value();
    std::vector<double> coef = frame0_lu.solve_vec(rhs);
    for (int k = 0; k < n; ++k) inv.shape(k, i) = -coef[k];
    inv.weingarten_nu[i] = coef[n];
  }
  inv.shape_low = Matrix<double>(n, n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += inv.g(j, k) * inv.shape(k, i);
      inv.shape_low(i, j) = acc;
    }
  inv.L1 = 0.0;
  for (int i = 0; i < n; ++i) inv.L1 += inv.shape(i, i);
  inv.L1 /= n;

  // Curvature of the Levi-Civita connection.
  Ten4 r_up = make_ten4(n);  // r_up[i][j][k][l] = R^l_ijk
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double acc = gam_hat[l][j][k].derivative(i).value() -
                       gam_hat[l][i][k].derivative(j).value();
          for (int m = 0; m < n; ++m)
            acc += gam_hat[l][i][m].value() * gam_hat[m][j][k].value() -
                   gam_hat[l][j][m].value() * gam_hat[m][i][k].value();
          r_up[i][j][k][l] = acc;
        }
  inv.curvature_low = make_ten4(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double acc = 0.0;
          for (int m = 0; m < n; ++m) acc += inv.g(l, m) * r_up[i][j][k][m];
          inv.curvature_low[i][j][k][l] = acc;
        }

  // Covariant derivative of the cubic form.
  inv.nabla_fp = make_ten4(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double acc = fp_low_j[i][j][k].derivative(l).value();
          for (int m = 0; m < n; ++m)
            acc -= inv.christoffel_metric[m](l, i) * inv.fp[m][j][k] +
                   inv.christoffel_metric[m](l, j) * inv.fp[i][m][k] +
                   inv.christoffel_metric[m](l, k) * inv.fp[i][j][m];
          inv.nabla_fp[i][j][k][l] = acc;
        }

  // Pick invariant and normalized scalar curvature.
  {
    Ten3 up1 = make_ten3(n);  // raise first index
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double acc = 0.0;
          for (int a = 0; a < n; ++a) acc += inv.g_inv(i, a) * inv.fp[a][j][k];
          up1[i][j][k] = acc;
        }
    Ten3 up2 = make_ten3(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double acc = 0.0;
          for (int b = 0; b < n; ++b) acc += inv.g_inv(j, b) * up1[i][b][k];
          up2[i][j][k] = acc;
        }
    double j_acc = 0.0, chi_acc = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double a_up = 0.0;
          for (int c = 0; c < n; ++c) a_up += inv.g_inv(k, c) * up2[i][j][c];
          j_acc += a_up * inv.fp[i][j][k];
        }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            chi_acc += inv.g_inv(i, l) * inv.g_inv(j, k) * inv.curvature_low[i][j][k][l];
    if (n > 1) {
      inv.J = j_acc / (n * (n - 1.0));
      inv.chi = chi_acc / (n * (n - 1.0));
    } else {
      // A curve has no Pick invariant or sectional curvature.
      inv.J = 0.0;
      inv.chi = 0.0;
    }
  }

  // Second route to the cubic form, through derivatives of h. In the frame
  // {x_i, H^{-1/(n+2)} xi} the transversal connection form is
  // tau_k = -(1/(n+2)) d_k log H, and
  // h_ijk = d_k h_ij + h_ij tau_k - h_lj Gamma^l_ki - h_il Gamma^l_kj,
  // A_ijk = -(1/2) H^{-1/(n+2)} h_ijk.
  inv.fp_alt = make_ten3(n);
  {
    std::vector<double> tau(n);
    for (int k = 0; k < n; ++k)
      tau[k] = -Hj.derivative(k).value() / ((n + 2.0) * inv.H);
    double hscale = -0.5 * std::pow(inv.H, -1.0 / (n + 2));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double acc = hj(i, j).derivative(k).value() + inv.h(i, j) * tau[k];
          for (int l = 0; l < n; ++l)
            acc -= inv.h(l, j) * inv.christoffel_induced[l](k, i) +
                   inv.h(i, l) * inv.christoffel_induced[l](k, j);
          inv.fp_alt[i][j][k] = hscale * acc;
        }
    double gap = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          gap = std::max(gap, std::abs(inv.fp_alt[i][j][k] - inv.fp[i][j][k]));
    inv.cross_route_gap = gap;
  }

  return inv;
}

PointInvariants invariants_at(const Chart& chart, std::span<const double> u,
                              const DerivOptions& opt) {
  std::vector<RJet> jets = chart_jets(chart, u, 4, opt);
  return invariants_from_jets(jets, u);
}

StructureResiduals structure_residuals(const PointInvariants& inv) {
  int n = inv.n;
  StructureResiduals r;

  for (int k = 0; k < n; ++k) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) acc += inv.g_inv(i, j) * inv.fp[i][j][k];
    r.apolarity = std::max(r.apolarity, std::abs(acc));
  }

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double a = inv.fp[i][j][k];
        r.symmetry_fp = std::max(r.symmetry_fp, std::abs(a - inv.fp[j][i][k]));
        r.symmetry_fp = std::max(r.symmetry_fp, std::abs(a - inv.fp[i][k][j]));
        r.symmetry_fp = std::max(r.symmetry_fp, std::abs(a - inv.fp[k][j][i]));
      }

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      r.symmetry_shape =
          std::max(r.symmetry_shape, std::abs(inv.shape_low(i, j) - inv.shape_low(j, i)));

  r.frame_metric = inv.frame_residual;
  r.frame_volume = inv.frame_volume_gap;
  for (double v : inv.weingarten_nu) r.weingarten_normal = std::max(r.weingarten_normal, std::abs(v));
  r.cross_route = inv.cross_route_gap;

  // Divergence of the cubic form, div_jl = g^mp A_jlm,p.
  Matrix<double> divA(n, n, 0.0);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) {
      double acc = 0.0;
      for (int m = 0; m < n; ++m)
        for (int p = 0; p < n; ++p) acc += inv.g_inv(m, p) * inv.nabla_fp[j][l][m][p];
      divA(j, l) = acc;
    }

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double lhs = inv.nabla_fp[i][j][k][l] - inv.nabla_fp[i][j][l][k];
          double rhs = 0.5 * (inv.g(i, k) * inv.shape_low(j, l) +
                              inv.g(j, k) * inv.shape_low(i, l) -
                              inv.g(i, l) * inv.shape_low(j, k) -
                              inv.g(j, l) * inv.shape_low(i, k));
          r.codazzi = std::max(r.codazzi, std::abs(lhs - rhs));
        }

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double want = 0.5 * n * (inv.L1 * inv.g(i, j) - inv.shape_low(i, j));
      r.contracted_codazzi = std::max(r.contracted_codazzi, std::abs(divA(i, j) - want));
    }

  double cj = inv.chi - inv.J;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double rhs = (inv.nabla_fp[i][j][k][l] - inv.nabla_fp[i][j][l][k]) +
                       cj * (inv.g(i, l) * inv.g(j, k) - inv.g(i, k) * inv.g(j, l)) +
                       (2.0 / n) * (inv.g(i, k) * divA(j, l) - inv.g(i, l) * divA(j, k));
          for (int m = 0; m < n; ++m)
            rhs += inv.fp_mixed[m](i, k) * inv.fp[j][l][m] -
                   inv.fp_mixed[m](i, l) * inv.fp[j][k][m];
          r.gauss = std::max(r.gauss, std::abs(inv.curvature_low[i][j][k][l] - rhs));
        }

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double rhs = 0.5 * (inv.g(j, k) * inv.shape_low(i, l) +
                              inv.shape_low(j, k) * inv.g(i, l) -
                              inv.g(i, k) * inv.shape_low(j, l) -
                              inv.shape_low(i, k) * inv.g(j, l));
          for (int m = 0; m < n; ++m)
            rhs -= inv.fp_mixed[m](j, k) * inv.fp[i][m][l] -
                   inv.fp_mixed[m](i, k) * inv.fp[j][m][l];
          r.gauss_frame = std::max(r.gauss_frame, std::abs(inv.curvature_low[i][j][k][l] - rhs));
        }

  r.chi_identity = n > 1 ? std::abs(inv.chi - inv.L1 - inv.J) : 0.0;

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      r.hypersphere =
          std::max(r.hypersphere, std::abs(inv.shape_low(i, j) - inv.L1 * inv.g(i, j)));
  for (const auto& a : inv.nabla_fp)
    r.parallel_fp = std::max(r.parallel_fp, max_abs(a));

  return r;
}

}  // namespace equiaff
