#include "dgh/assembly.hpp"

#include <sstream>

#include "dgh/errors.hpp"

namespace dgh {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

std::string qp_location(const char* entity, int id, int q, double J) {
  std::ostringstream os;
  os << entity << " " << id << ", quadrature point " << q;
  (void)J;
  return os.str();
}

template <int D>
Eigen::Matrix<double, D, D> unflatten(const Eigen::MatrixXd& rows, int q) {
  Eigen::Matrix<double, D, D> M;
  for (int a = 0; a < D; ++a)
    for (int b = 0; b < D; ++b) M(a, b) = rows(q, a * D + b);
  return M;
}

/// Values of the already-scaled boundary/body data at quadrature points.
Eigen::MatrixXd eval_fn(const SpaceTimeFn& fn, const Eigen::Matrix3Xd& pts, double t, int d) {
  Eigen::MatrixXd out(pts.cols(), d);
  for (int q = 0; q < pts.cols(); ++q) {
    const Eigen::Vector3d v = fn(pts.col(q), t);
    for (int c = 0; c < d; ++c) out(q, c) = v[c];
  }
  return out;
}

template <int D>
class Assembler {
public:
  Assembler(const Problem& pb, const Eigen::VectorXd& state, double t,
            const std::vector<double>& eta, bool want_jac)
      : pb_(pb), ctx_(*pb.ctx), mesh_(*pb.mesh), part_(*pb.partition), state_(state), t_(t),
        eta_(eta), want_jac_(want_jac), nb_(pb.dofs.nb), nfb_(pb.dofs.nfb) {
    res_.setZero(pb_.dofs.total);
    if (want_jac_) trip_.reserve(estimate_nnz());
    cache_jumps();
  }

  AssembledSystem run() {
    for (int e = 0; e < mesh_.n_elements(); ++e) element_sweep(e);
    for (int f = 0; f < mesh_.n_faces(); ++f) {
      switch (part_.face_kind[f]) {
        case BCKind::Internal:
        case BCKind::DirichletNitsche: face_sweep(f); break;
        case BCKind::Neumann: neumann_sweep(f); break;
        case BCKind::DirichletLagrange: multiplier_sweep(f); break;
      }
    }
    AssembledSystem out;
    out.residual = std::move(res_);
    if (want_jac_) {
      out.jacobian.resize(pb_.dofs.total, pb_.dofs.total);
      out.jacobian.setFromTriplets(trip_.begin(), trip_.end());
      out.has_jacobian = true;
    }
    return out;
  }

private:
  static constexpr int DD = D * D;

  size_t estimate_nnz() const {
    const int bu = D * nb_;
    size_t n = 0;
    n += static_cast<size_t>(mesh_.n_elements()) * bu * bu * 8;
    if (pb_.incompressible()) n += static_cast<size_t>(mesh_.n_elements()) * nb_ * bu * 10;
    n += static_cast<size_t>(pb_.dofs.n_multiplier_faces) * D * nfb_ * (2 * bu + 3 * nfb_);
    return n;
  }

  // jump of the displacement on every lifting face, from the left perspective
  void cache_jumps() {
    jumps_.assign(mesh_.n_faces(), {});
    for (int f = 0; f < mesh_.n_faces(); ++f) {
      if (!ctx_.lifts(f)) continue;
      const Face& F = mesh_.faces[f];
      const FaceOps& ops = ctx_.face_ops(f);
      const Eigen::MatrixXd left =
          ops.side[0].tr.leftCols(nb_) * ctx_.gather(state_, pb_.u_space, F.left);
      if (F.boundary()) {
        const auto& region = pb_.regions[part_.face_region[f]];
        jumps_[f] = 2.0 * (left - eval_fn(region.value, ops.quad.pts, t_, D));
      } else {
        jumps_[f] =
            left - ops.side[1].tr.leftCols(nb_) * ctx_.gather(state_, pb_.u_space, F.right);
      }
    }
  }

  // ----------------------------------------------------------------- volume
  void element_sweep(int e) {
    const ElemOps& ops = ctx_.elem_ops(e);
    const int nq = static_cast<int>(ops.quad.w.size());
    const int bu = D * nb_;

    // local trial columns: own block first, then the neighbor across each
    // internal lifting face
    std::vector<int> col_elems = {e};
    std::vector<int> col_faces;  // lifting faces in sweep order
    for (int f : mesh_.element_faces[e]) {
      if (!ctx_.lifts(f)) continue;
      col_faces.push_back(f);
      const int n = mesh_.neighbor(f, e);
      if (n >= 0) col_elems.push_back(n);
    }
    const int nloc = static_cast<int>(col_elems.size()) * bu;

    // TestGrad(q*DD + a*D+b, a*nb + j) = d_b phi_j(q)
    Eigen::MatrixXd test_grad = Eigen::MatrixXd::Zero(nq * DD, bu);
    for (int q = 0; q < nq; ++q)
      for (int a = 0; a < D; ++a)
        for (int b = 0; b < D; ++b)
          for (int j = 0; j < nb_; ++j)
            test_grad(q * DD + a * D + b, a * nb_ + j) = ops.grads[b](q, j);

    // trial discrete-gradient operator
    Eigen::MatrixXd Gop;
    if (want_jac_) {
      Gop = Eigen::MatrixXd::Zero(nq * DD, nloc);
      Gop.leftCols(bu) = test_grad;
    }

    // G^k_T(u) values, assembled from the cached jumps
    Eigen::MatrixXd Gvals(nq, DD);
    {
      const Eigen::MatrixXd U = ctx_.gather(state_, pb_.u_space, e);
      for (int j = 0; j < D; ++j) {
        const Eigen::MatrixXd dj = ops.grads[j].leftCols(nb_) * U;
        for (int a = 0; a < D; ++a) Gvals.col(a * D + j) = dj.col(a);
      }
    }
    int which = 1;
    for (int f : col_faces) {
      const FaceOps& fops = ctx_.face_ops(f);
      const int s = ctx_.side_of(f, e);
      const double sign = s == 0 ? 1.0 : -1.0;
      const bool nitsche = mesh_.faces[f].boundary();
      const double own_factor = nitsche ? 2.0 : 1.0;
      for (int a = 0; a < D; ++a) {
        const Eigen::VectorXd na = sign * fops.quad.normals.row(a).transpose();
        const Eigen::MatrixXd EN = 0.5 * fops.side[s].E_k * na.asDiagonal();
        {  // values
          const Eigen::MatrixXd r = EN * jumps_[f];
          for (int b = 0; b < D; ++b) Gvals.col(a * D + b) -= r.col(b);
        }
        if (!want_jac_) continue;
        const Eigen::MatrixXd Lown =
            own_factor * (EN * fops.side[s].tr.leftCols(nb_));  // nq x nb
        for (int c = 0; c < D; ++c)
          for (int j = 0; j < nb_; ++j)
            for (int q = 0; q < nq; ++q)
              Gop(q * DD + a * D + c, c * nb_ + j) -= Lown(q, j);
        if (!nitsche) {
          const Eigen::MatrixXd Loth = EN * fops.side[1 - s].tr.leftCols(nb_);
          const int base = which * bu;
          for (int c = 0; c < D; ++c)
            for (int j = 0; j < nb_; ++j)
              for (int q = 0; q < nq; ++q)
                Gop(q * DD + a * D + c, base + c * nb_ + j) += Loth(q, j);
        }
      }
      if (mesh_.neighbor(f, e) >= 0) ++which;
    }

    // constitutive sweep over the volume points
    const bool incomp = pb_.incompressible();
    Eigen::VectorXd pvals_q = Eigen::VectorXd::Zero(nq);
    if (incomp) {
      const Eigen::VectorXd pc = state_.segment(pb_.dofs.p_offset(e), nb_);
      pvals_q = ops.vals.leftCols(nb_) * pc;
    }

    Eigen::VectorXd rP(nq * DD);               // w_q * P(q) flattened
    Eigen::MatrixXd AG;                        // w_q * A_q * Gop rows
    Eigen::VectorXd JFw = Eigen::VectorXd::Zero(nq * DD);  // w_q J F^{-T} flattened
    Eigen::VectorXd detm1(nq);
    if (want_jac_) AG.resize(nq * DD, nloc);

    for (int q = 0; q < nq; ++q) {
      Eigen::Matrix<double, D, D> Fq = unflatten<D>(Gvals, q);
      for (int a = 0; a < D; ++a) Fq(a, a) += 1.0;
      const Kinematics<double, D> kin(Fq);
      if (kin.J <= 0.0)
        throw invalid_state_error(qp_location("element", e, q, kin.J), kin.J);
      const double pq = incomp ? pvals_q[q] : 0.0;
      const Eigen::Matrix<double, D, D> P = first_piola<double, D>(pb_.law, pb_.material, kin, pq);
      const double w = ops.quad.w[q];
      for (int a = 0; a < D; ++a)
        for (int b = 0; b < D; ++b) rP[q * DD + a * D + b] = w * P(a, b);
      if (incomp) {
        detm1[q] = kin.J - 1.0;
        const Eigen::Matrix<double, D, D> FinvT = Fq.inverse().transpose();
        for (int a = 0; a < D; ++a)
          for (int b = 0; b < D; ++b) JFw[q * DD + a * D + b] = w * kin.J * FinvT(a, b);
      }
      if (want_jac_) {
        const auto A = elasticity_tensor<D>(pb_.law, pb_.material, kin, pq);
        AG.middleRows(q * DD, DD) = w * (A * Gop.middleRows(q * DD, DD));
      }
    }

    // residual: volume stress work and body force
    Eigen::VectorXd r_u = test_grad.transpose() * rP;
    {
      const Eigen::MatrixXd f = eval_fn(pb_.body_force, ops.quad.pts, t_, D);
      const Eigen::MatrixXd mom =
          ops.vals.leftCols(nb_).transpose() * ops.quad.w.asDiagonal() * f;  // nb x D
      for (int a = 0; a < D; ++a) r_u.segment(a * nb_, nb_) -= mom.col(a);
    }
    add_res_u(e, r_u);

    if (incomp) {
      const Eigen::VectorXd r_p = ops.vals.leftCols(nb_).transpose() *
                                  (ops.quad.w.array() * detm1.array()).matrix();
      add_res_p(e, r_p);
    }

    if (!want_jac_) return;

    const Eigen::MatrixXd K_uu = test_grad.transpose() * AG;
    scatter_uu(e, col_elems, K_uu);

    if (incomp) {
      // coupling rows/columns with det(F) F^{-T}
      Eigen::MatrixXd Mp(nq * DD, nb_);
      for (int q = 0; q < nq; ++q)
        for (int ab = 0; ab < DD; ++ab)
          for (int j = 0; j < nb_; ++j)
            Mp(q * DD + ab, j) = JFw[q * DD + ab] * ops.vals(q, j);
      const Eigen::MatrixXd K_up = -test_grad.transpose() * Mp;
      scatter_block(pb_.dofs.u_offset(e), pb_.dofs.p_offset(e), K_up);

      Eigen::MatrixXd JFG(nq, nloc);
      for (int q = 0; q < nq; ++q)
        JFG.row(q) = JFw.segment(q * DD, DD).transpose() * Gop.middleRows(q * DD, DD);
      const Eigen::MatrixXd K_pu = ops.vals.leftCols(nb_).transpose() * JFG;
      for (size_t w = 0; w < col_elems.size(); ++w)
        scatter_block(pb_.dofs.p_offset(e), pb_.dofs.u_offset(col_elems[w]),
                      K_pu.middleCols(w * D * nb_, D * nb_));
    }
  }

  // ------------------------------------------------------- internal/Nitsche
  void face_sweep(int f) {
    const Face& F = mesh_.faces[f];
    const FaceOps& ops = ctx_.face_ops(f);
    const int nq = static_cast<int>(ops.quad.w.size());
    const int ns = F.boundary() ? 1 : 2;
    const int bu = D * nb_;
    const int nloc = ns * bu;
    const bool incomp = pb_.incompressible();
    const double eta = eta_[f];

    const int elems[2] = {F.left, F.right};
    const Eigen::MatrixXd& J0 = jumps_[f];

    // def grads, stresses and (optionally) tangents per side
    Eigen::MatrixXd Fk1[2], avgP(nq, DD), avgRk(nq, DD);
    Eigen::VectorXd pq[2];
    avgP.setZero();
    avgRk.setZero();
    Eigen::MatrixXd Y;   // avg of w-less A:dF^{k+1} rows, nq*DD x nloc
    Eigen::MatrixXd Yp;  // avg of dP/dp columns, nq*DD x ns*nb
    Eigen::MatrixXd dRk; // avg of the BR2 lifting derivative, nq*DD x nloc
    if (want_jac_) {
      Y = Eigen::MatrixXd::Zero(nq * DD, nloc);
      dRk = Eigen::MatrixXd::Zero(nq * DD, nloc);
      if (incomp) Yp = Eigen::MatrixXd::Zero(nq * DD, ns * nb_);
    }

    for (int s = 0; s < ns; ++s) {
      const int e = elems[s];
      const FaceSideOps& side = ops.side[s];
      // F^{k+1} on this side
      Eigen::MatrixXd Fs(nq, DD);
      {
        const Eigen::MatrixXd U = ctx_.gather(state_, pb_.u_space, e);
        for (int j = 0; j < D; ++j) {
          const Eigen::MatrixXd dj = side.grad_tr[j] * U;
          for (int a = 0; a < D; ++a) Fs.col(a * D + j) = dj.col(a);
        }
        for (int a = 0; a < D; ++a) {
          const Eigen::VectorXd na = ops.quad.normals.row(a).transpose();
          const Eigen::MatrixXd r = 0.5 * side.K_kp1 * (na.asDiagonal() * J0);
          for (int b = 0; b < D; ++b) Fs.col(a * D + b) -= r.col(b);
          Fs.col(a * D + a).array() += 1.0;
        }
      }
      Fk1[s] = Fs;
      if (incomp) {
        const Eigen::VectorXd pc = state_.segment(pb_.dofs.p_offset(e), nb_);
        pq[s] = side.tr.leftCols(nb_) * pc;
      }
      // R^k lifting values
      for (int a = 0; a < D; ++a) {
        const Eigen::VectorXd na = ops.quad.normals.row(a).transpose();
        const Eigen::MatrixXd r = 0.5 * side.K_k * (na.asDiagonal() * J0);
        for (int b = 0; b < D; ++b) avgRk.col(a * D + b) += r.col(b) / ns;
      }

      for (int q = 0; q < nq; ++q) {
        const Eigen::Matrix<double, D, D> Fq = unflatten<D>(Fs, q);
        const Kinematics<double, D> kin(Fq);
        if (kin.J <= 0.0)
          throw invalid_state_error(qp_location("face", f, q, kin.J), kin.J);
        const double p = incomp ? pq[s][q] : 0.0;
        const Eigen::Matrix<double, D, D> P =
            first_piola<double, D>(pb_.law, pb_.material, kin, p);
        for (int a = 0; a < D; ++a)
          for (int b = 0; b < D; ++b) avgP(q, a * D + b) += P(a, b) / ns;
        if (want_jac_ && incomp) {
          const Eigen::Matrix<double, D, D> FinvT = Fq.inverse().transpose();
          for (int a = 0; a < D; ++a)
            for (int b = 0; b < D; ++b)
              for (int j = 0; j < nb_; ++j)
                Yp(q * DD + a * D + b, s * nb_ + j) +=
                    -kin.J * FinvT(a, b) * side.tr(q, j) / ns;
        }
      }

      if (!want_jac_) continue;

      // dF^{k+1}_s operator and its contraction with the tangent
      Eigen::MatrixXd DF = Eigen::MatrixXd::Zero(nq * DD, nloc);
      for (int c = 0; c < D; ++c)
        for (int j = 0; j < nb_; ++j)
          for (int q = 0; q < nq; ++q)
            for (int b = 0; b < D; ++b)
              DF(q * DD + c * D + b, s * bu + c * nb_ + j) = side.grad_tr[b](q, j);
      const double own_factor = F.boundary() ? 2.0 : 1.0;
      for (int a = 0; a < D; ++a) {
        const Eigen::VectorXd na = ops.quad.normals.row(a).transpose();
        const Eigen::MatrixXd KN_kp1 = 0.5 * side.K_kp1 * na.asDiagonal();
        const Eigen::MatrixXd KN_k = 0.5 * side.K_k * na.asDiagonal();
        for (int w = 0; w < ns; ++w) {
          const double factor = (w == 0 ? own_factor : -1.0);
          // trial trace of the w-th column block; own_factor handles Nitsche
          const Eigen::MatrixXd tw =
              (w == 0 ? ops.side[0].tr.leftCols(nb_) : ops.side[1].tr.leftCols(nb_));
          const Eigen::MatrixXd Lk1 = factor * (KN_kp1 * tw);
          const Eigen::MatrixXd Lk = factor * (KN_k * tw);
          for (int c = 0; c < D; ++c)
            for (int j = 0; j < nb_; ++j)
              for (int q = 0; q < nq; ++q) {
                DF(q * DD + a * D + c, w * bu + c * nb_ + j) -= Lk1(q, j);
                dRk(q * DD + a * D + c, w * bu + c * nb_ + j) += Lk(q, j) / ns;
              }
        }
      }
      for (int q = 0; q < nq; ++q) {
        const Eigen::Matrix<double, D, D> Fq = unflatten<D>(Fk1[s], q);
        const Kinematics<double, D> kin(Fq);
        const double p = incomp ? pq[s][q] : 0.0;
        const auto A = elasticity_tensor<D>(pb_.law, pb_.material, kin, p);
        Y.middleRows(q * DD, DD) += (A * DF.middleRows(q * DD, DD)) / ns;
      }
    }

    // residual rows for each test side: -({P} n_e) . v + eta ({R^k} n_e) . v
    for (int s = 0; s < ns; ++s) {
      const double sn = s == 0 ? 1.0 : -1.0;
      const FaceSideOps& side = ops.side[s];
      Eigen::VectorXd r_u = Eigen::VectorXd::Zero(bu);
      for (int a = 0; a < D; ++a) {
        Eigen::VectorXd flux(nq);
        for (int q = 0; q < nq; ++q) {
          double acc = 0;
          for (int b = 0; b < D; ++b)
            acc += (-avgP(q, a * D + b) + eta * avgRk(q, a * D + b)) *
                   ops.quad.normals(b, q);
          flux[q] = sn * ops.quad.w[q] * acc;
        }
        r_u.segment(a * nb_, nb_) = side.tr.leftCols(nb_).transpose() * flux;
      }
      add_res_u(elems[s], r_u);
    }

    if (want_jac_) {
      for (int s = 0; s < ns; ++s) {
        const double sn = s == 0 ? 1.0 : -1.0;
        const FaceSideOps& side = ops.side[s];
        // contract tensor rows with the normal: Z(q*D + a, col)
        Eigen::MatrixXd Zu = Eigen::MatrixXd::Zero(nq * D, nloc);
        Eigen::MatrixXd Zp;
        if (incomp) Zp = Eigen::MatrixXd::Zero(nq * D, ns * nb_);
        for (int q = 0; q < nq; ++q)
          for (int a = 0; a < D; ++a)
            for (int b = 0; b < D; ++b) {
              const double nb_q = ops.quad.normals(b, q);
              const double w = sn * ops.quad.w[q] * nb_q;
              Zu.row(q * D + a) +=
                  w * (-Y.row(q * DD + a * D + b) + eta * dRk.row(q * DD + a * D + b));
              if (incomp) Zp.row(q * D + a) += w * (-Yp.row(q * DD + a * D + b));
            }
        Eigen::MatrixXd K_u = Eigen::MatrixXd::Zero(bu, nloc);
        Eigen::MatrixXd K_p;
        if (incomp) K_p = Eigen::MatrixXd::Zero(bu, ns * nb_);
        for (int a = 0; a < D; ++a)
          for (int q = 0; q < nq; ++q) {
            K_u.middleRows(a * nb_, nb_) +=
                side.tr.leftCols(nb_).row(q).transpose() * Zu.row(q * D + a);
            if (incomp)
              K_p.middleRows(a * nb_, nb_) +=
                  side.tr.leftCols(nb_).row(q).transpose() * Zp.row(q * D + a);
          }
        for (int w = 0; w < ns; ++w) {
          scatter_block(pb_.dofs.u_offset(elems[s]), pb_.dofs.u_offset(elems[w]),
                        K_u.middleCols(w * bu, bu));
          if (incomp)
            scatter_block(pb_.dofs.u_offset(elems[s]), pb_.dofs.p_offset(elems[w]),
                          K_p.middleCols(w * nb_, nb_));
        }
      }
    }

    // LBB pressure-jump stabilization on internal faces
    if (incomp && !F.boundary()) {
      const double coef = pb_.stab.eta_lbb * F.h;
      const Eigen::MatrixXd tr0 = ops.side[0].tr.leftCols(nb_);
      const Eigen::MatrixXd tr1 = ops.side[1].tr.leftCols(nb_);
      const Eigen::VectorXd pjump = pq[0].size() ? (pq[0] - pq[1]) : Eigen::VectorXd();
      Eigen::VectorXd pj = pjump;
      if (pj.size() == 0) {
        const Eigen::VectorXd pcl = state_.segment(pb_.dofs.p_offset(F.left), nb_);
        const Eigen::VectorXd pcr = state_.segment(pb_.dofs.p_offset(F.right), nb_);
        pj = tr0 * pcl - tr1 * pcr;
      }
      add_res_p(F.left, coef * tr0.transpose() * (ops.quad.w.asDiagonal() * pj));
      add_res_p(F.right, -coef * tr1.transpose() * (ops.quad.w.asDiagonal() * pj));
      if (want_jac_) {
        const Eigen::MatrixXd M00 = coef * tr0.transpose() * ops.quad.w.asDiagonal() * tr0;
        const Eigen::MatrixXd M01 = coef * tr0.transpose() * ops.quad.w.asDiagonal() * tr1;
        const Eigen::MatrixXd M10 = coef * tr1.transpose() * ops.quad.w.asDiagonal() * tr0;
        const Eigen::MatrixXd M11 = coef * tr1.transpose() * ops.quad.w.asDiagonal() * tr1;
        scatter_block(pb_.dofs.p_offset(F.left), pb_.dofs.p_offset(F.left), M00);
        scatter_block(pb_.dofs.p_offset(F.left), pb_.dofs.p_offset(F.right), -M01);
        scatter_block(pb_.dofs.p_offset(F.right), pb_.dofs.p_offset(F.left), -M10);
        scatter_block(pb_.dofs.p_offset(F.right), pb_.dofs.p_offset(F.right), M11);
      }
    }
  }

  // --------------------------------------------------------------- Neumann
  void neumann_sweep(int f) {
    const Face& F = mesh_.faces[f];
    const FaceOps& ops = ctx_.face_ops(f);
    const auto& region = pb_.regions[part_.face_region[f]];
    const int nq = static_cast<int>(ops.quad.w.size());
    Eigen::MatrixXd g(nq, D);
    for (int q = 0; q < nq; ++q) {
      const Eigen::Vector3d v =
          region.traction(ops.quad.pts.col(q), ops.quad.normals.col(q), t_);
      for (int c = 0; c < D; ++c) g(q, c) = v[c];
    }
    const Eigen::MatrixXd mom =
        ops.side[0].tr.leftCols(nb_).transpose() * ops.quad.w.asDiagonal() * g;
    Eigen::VectorXd r_u(D * nb_);
    for (int a = 0; a < D; ++a) r_u.segment(a * nb_, nb_) = -mom.col(a);
    add_res_u(F.left, r_u);
  }

  // ---------------------------------------------- Lagrange multiplier faces
  void multiplier_sweep(int f) {
    const Face& F = mesh_.faces[f];
    const FaceOps& ops = ctx_.face_ops(f);
    const int nq = static_cast<int>(ops.quad.w.size());
    const int lf = part_.multiplier_index[f];
    const int e = F.left;
    const FaceBasis& fb = pb_.lambda_space.bases[lf];

    Eigen::MatrixXd psi;
    fb.eval(ops.quad.pts, psi);  // nq x nfb

    // multiplier values and displacement trace
    Eigen::MatrixXd lam(nq, D), uval(nq, D);
    for (int c = 0; c < D; ++c) {
      lam.col(c) = psi * state_.segment(pb_.dofs.lambda_offset(lf, c), nfb_);
      uval.col(c) = ops.side[0].tr.leftCols(nb_) *
                    state_.segment(pb_.dofs.u_offset(e, c), nb_);
    }
    const auto& region = pb_.regions[part_.face_region[f]];
    const Eigen::MatrixXd g = eval_fn(region.value, ops.quad.pts, t_, D);

    // motion rows: -int lambda . v
    Eigen::VectorXd r_u(D * nb_);
    for (int c = 0; c < D; ++c)
      r_u.segment(c * nb_, nb_) = -ops.side[0].tr.leftCols(nb_).transpose() *
                                  (ops.quad.w.asDiagonal() * lam.col(c));
    add_res_u(e, r_u);

    // constraint rows: int (u - g) . s
    Eigen::VectorXd r_l(D * nfb_);
    for (int c = 0; c < D; ++c)
      r_l.segment(c * nfb_, nfb_) =
          psi.transpose() * (ops.quad.w.asDiagonal() * (uval.col(c) - g.col(c)));

    if (want_jac_) {
      const Eigen::MatrixXd M = psi.transpose() * ops.quad.w.asDiagonal() *
                                ops.side[0].tr.leftCols(nb_);  // nfb x nb
      for (int c = 0; c < D; ++c) {
        scatter_block(pb_.dofs.u_offset(e, c), pb_.dofs.lambda_offset(lf, c), -M.transpose());
        scatter_block(pb_.dofs.lambda_offset(lf, c), pb_.dofs.u_offset(e, c), M);
      }
    }

    // edge jump penalty over internal edges of the multiplier region
    for (const MultiplierEdge& edge : part_.edges[lf]) {
      if (!edge.internal) continue;
      const int lf2 = part_.multiplier_index[edge.other_face];
      const PhysQuad eq = mesh_.edge_quadrature(edge.verts, ctx_.quad_degree());
      Eigen::MatrixXd psi_e, psi2_e;
      fb.eval(eq.pts, psi_e);
      pb_.lambda_space.bases[lf2].eval(eq.pts, psi2_e);
      const double coef = pb_.stab.eta_lambda * edge.h;
      for (int c = 0; c < D; ++c) {
        const Eigen::VectorXd l1 = psi_e * state_.segment(pb_.dofs.lambda_offset(lf, c), nfb_);
        const Eigen::VectorXd l2 =
            psi2_e * state_.segment(pb_.dofs.lambda_offset(lf2, c), nfb_);
        r_l.segment(c * nfb_, nfb_) +=
            coef * psi_e.transpose() * (eq.w.asDiagonal() * (l1 - l2));
      }
      if (want_jac_) {
        const Eigen::MatrixXd Mee = coef * psi_e.transpose() * eq.w.asDiagonal() * psi_e;
        const Eigen::MatrixXd Meo = coef * psi_e.transpose() * eq.w.asDiagonal() * psi2_e;
        for (int c = 0; c < D; ++c) {
          scatter_block(pb_.dofs.lambda_offset(lf, c), pb_.dofs.lambda_offset(lf, c), Mee);
          scatter_block(pb_.dofs.lambda_offset(lf, c), pb_.dofs.lambda_offset(lf2, c), -Meo);
        }
      }
    }
    res_.segment(pb_.dofs.lambda_offset(lf), D * nfb_) += r_l;
  }

  // ------------------------------------------------------------- utilities
  void add_res_u(int e, const Eigen::VectorXd& local) {
    res_.segment(pb_.dofs.u_offset(e), D * nb_) += local;
  }
  void add_res_p(int e, const Eigen::VectorXd& local) {
    res_.segment(pb_.dofs.p_offset(e), nb_) += local;
  }
  void scatter_block(int row0, int col0, const Eigen::MatrixXd& block) {
    for (int i = 0; i < block.rows(); ++i)
      for (int j = 0; j < block.cols(); ++j)
        if (block(i, j) != 0.0) trip_.emplace_back(row0 + i, col0 + j, block(i, j));
  }
  void scatter_uu(int e, const std::vector<int>& col_elems, const Eigen::MatrixXd& K) {
    const int bu = D * nb_;
    for (size_t w = 0; w < col_elems.size(); ++w)
      scatter_block(pb_.dofs.u_offset(e), pb_.dofs.u_offset(col_elems[w]),
                    K.middleCols(w * bu, bu));
  }

  const Problem& pb_;
  const DGContext& ctx_;
  const Mesh& mesh_;
  const BoundaryPartition& part_;
  const Eigen::VectorXd& state_;
  double t_;
  const std::vector<double>& eta_;
  bool want_jac_;
  int nb_, nfb_;

  Eigen::VectorXd res_;
  Triplets trip_;
  std::vector<Eigen::MatrixXd> jumps_;
};

template <int D>
std::vector<double> face_eta_impl(const Problem& pb, const Eigen::VectorXd& state, double t,
                                  EtaStats* stats) {
  const DGContext& ctx = *pb.ctx;
  const Mesh& mesh = *pb.mesh;
  std::vector<double> eta(mesh.n_faces(), pb.stab.eps);
  const bool incomp = pb.incompressible();
  const int nb = pb.dofs.nb;
  const FaceDataFn lookup = pb.dirichlet_lookup();

  double emin = 1e300, emax = -1e300, esum = 0, lmax = 0;
  int count = 0;
  for (int f = 0; f < mesh.n_faces(); ++f) {
    if (!ctx.lifts(f)) continue;
    double lambda_f = 0;
    if (pb.stab.beta > 0) {
      const Face& F = mesh.faces[f];
      const FaceOps& ops = ctx.face_ops(f);
      const int ns = F.boundary() ? 1 : 2;
      double acc = 0;
      for (int s = 0; s < ns; ++s) {
        const int e = s == 0 ? F.left : F.right;
        const Eigen::MatrixXd Fs = ctx.def_grad_face(state, pb.u_space, e, f, &lookup, t);
        Eigen::VectorXd pq = Eigen::VectorXd::Zero(Fs.rows());
        if (incomp)
          pq = ops.side[s].tr.leftCols(nb) *
               state.segment(pb.dofs.p_offset(e), nb);
        double wsum = 0, lsum = 0;
        for (int q = 0; q < Fs.rows(); ++q) {
          const Eigen::Matrix<double, D, D> Fq = unflatten<D>(Fs, q);
          const Kinematics<double, D> kin(Fq);
          const auto A = elasticity_tensor<D>(pb.law, pb.material, kin, incomp ? pq[q] : 0.0);
          const double lam = std::max(0.0, -tensor_min_eigenvalue(A));
          lsum += ops.quad.w[q] * lam;
          wsum += ops.quad.w[q];
        }
        acc += lsum / wsum;
      }
      lambda_f = acc / ns;
    }
    eta[f] = eta_face(pb.stab, lambda_f);
    emin = std::min(emin, eta[f]);
    emax = std::max(emax, eta[f]);
    lmax = std::max(lmax, lambda_f);
    esum += eta[f];
    ++count;
  }
  if (stats && count > 0) {
    stats->min = emin;
    stats->max = emax;
    stats->mean = esum / count;
    stats->lambda_max = lmax;
  }
  return eta;
}

}  // namespace

AssembledSystem assemble_system(const Problem& pb, const Eigen::VectorXd& state, double t,
                                const std::vector<double>& eta_face, bool want_jacobian) {
  if (pb.mesh->dim == 2)
    return Assembler<2>(pb, state, t, eta_face, want_jacobian).run();
  return Assembler<3>(pb, state, t, eta_face, want_jacobian).run();
}

std::vector<double> compute_face_eta(const Problem& pb, const Eigen::VectorXd& state, double t,
                                     EtaStats* stats) {
  if (pb.mesh->dim == 2) return face_eta_impl<2>(pb, state, t, stats);
  return face_eta_impl<3>(pb, state, t, stats);
}

}  // namespace dgh
