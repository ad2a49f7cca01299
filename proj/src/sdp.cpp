#include "vrdm/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace vrdm {

int SdpProblem::add_block(const std::string& name, int dim) {
  if (finalized_) throw std::logic_error("sdp: problem already finalized");
  if (dim <= 0) throw std::invalid_argument("sdp: block dimension must be positive");
  blocks_.push_back({name, dim});
  objective_.push_back(Eigen::MatrixXd::Zero(dim, dim));
  return static_cast<int>(blocks_.size()) - 1;
}

int SdpProblem::add_free_variable() {
  if (finalized_) throw std::logic_error("sdp: problem already finalized");
  return n_free_++;
}

int SdpProblem::add_constraint(double rhs) {
  if (finalized_) throw std::logic_error("sdp: problem already finalized");
  if (!std::isfinite(rhs)) throw std::invalid_argument("sdp: non-finite rhs");
  rhs_.push_back(rhs);
  row_entries_.emplace_back();
  row_free_.emplace_back();
  return static_cast<int>(rhs_.size()) - 1;
}

void SdpProblem::add_entry(int constraint, int block, int r, int c, double w) {
  if (w == 0.0) return;
  if (r > c) std::swap(r, c);
  const double v = (r == c) ? w : 0.5 * w;
  row_entries_[constraint].push_back(
      {static_cast<std::int32_t>(block), static_cast<std::int32_t>(r),
       static_cast<std::int32_t>(c), v});
}

void SdpProblem::add_free_entry(int constraint, int k, double w) {
  if (w == 0.0) return;
  row_free_[constraint].push_back({static_cast<std::int32_t>(k), w});
}

void SdpProblem::set_objective(int block, const Eigen::MatrixXd& c) {
  if (c.rows() != blocks_[block].dim || c.cols() != blocks_[block].dim)
    throw std::invalid_argument("sdp: objective dimension mismatch");
  objective_[block] = 0.5 * (c + c.transpose());
}

void SdpProblem::set_free_objective(const Eigen::VectorXd& c) {
  free_objective_ = c;
}

void SdpProblem::finalize() {
  if (finalized_) return;
  if (free_objective_.size() == 0) free_objective_ = Eigen::VectorXd::Zero(n_free_);
  if (free_objective_.size() != n_free_)
    throw std::invalid_argument("sdp: free objective size mismatch");

  // merge duplicate coordinates within each row; drop empty rows
  std::vector<double> rhs2;
  std::vector<std::vector<Entry>> rows2;
  std::vector<std::vector<std::pair<std::int32_t, double>>> free2;
  int dropped = 0;
  for (std::size_t i = 0; i < rhs_.size(); ++i) {
    auto& row = row_entries_[i];
    std::sort(row.begin(), row.end(), [](const Entry& a, const Entry& b) {
      return std::tie(a.block, a.row, a.col) < std::tie(b.block, b.row, b.col);
    });
    std::vector<Entry> merged;
    for (const auto& e : row) {
      if (!std::isfinite(e.value))
        throw std::invalid_argument("sdp: non-finite constraint entry");
      if (!merged.empty() && merged.back().block == e.block &&
          merged.back().row == e.row && merged.back().col == e.col)
        merged.back().value += e.value;
      else
        merged.push_back(e);
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(),
                                [](const Entry& e) { return e.value == 0.0; }),
                 merged.end());
    auto& fr = row_free_[i];
    std::sort(fr.begin(), fr.end());
    std::vector<std::pair<std::int32_t, double>> fmerged;
    for (const auto& e : fr) {
      if (!fmerged.empty() && fmerged.back().first == e.first)
        fmerged.back().second += e.second;
      else
        fmerged.push_back(e);
    }
    if (merged.empty() && fmerged.empty()) {
      if (std::abs(rhs_[i]) > 1e-12)
        throw std::runtime_error("sdp: empty constraint row with nonzero rhs");
      ++dropped;
      continue;
    }
    rhs2.push_back(rhs_[i]);
    rows2.push_back(std::move(merged));
    free2.push_back(std::move(fmerged));
  }
  if (dropped > 0)
    report_.push_back("dropped " + std::to_string(dropped) +
                      " empty constraint rows");
  rhs_ = std::move(rhs2);
  row_entries_ = std::move(rows2);
  row_free_ = std::move(free2);

  // flatten to CSR and build the per-block transpose adjacency
  row_offsets_.assign(1, 0);
  free_offsets_.assign(1, 0);
  std::size_t nnz = 0, fnnz = 0;
  for (const auto& r : row_entries_) nnz += r.size();
  for (const auto& r : row_free_) fnnz += r.size();
  entries_.reserve(nnz);
  free_entries_.reserve(fnnz);
  block_transpose_.assign(blocks_.size(), {});
  std::vector<std::size_t> per_block(blocks_.size(), 0);
  for (const auto& r : row_entries_)
    for (const auto& e : r) ++per_block[e.block];
  for (std::size_t b = 0; b < blocks_.size(); ++b)
    block_transpose_[b].reserve(per_block[b]);

  for (std::size_t i = 0; i < rhs_.size(); ++i) {
    for (const auto& e : row_entries_[i]) {
      entries_.push_back(e);
      block_transpose_[e.block].push_back(
          {e.row, e.col, static_cast<std::int32_t>(i), e.value});
    }
    row_offsets_.push_back(entries_.size());
    for (const auto& fe : row_free_[i]) free_entries_.push_back(fe);
    free_offsets_.push_back(free_entries_.size());
  }
  row_entries_.clear();
  row_entries_.shrink_to_fit();
  row_free_.clear();
  row_free_.shrink_to_fit();
  finalized_ = true;
}

void SdpProblem::apply_forward(const std::vector<Eigen::MatrixXd>& x,
                               const Eigen::VectorXd& f,
                               Eigen::VectorXd& out) const {
  const int m = n_constraints();
  out.resize(m);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < m; ++i) {
    double acc = 0.0;
    for (std::size_t e = row_offsets_[i]; e < row_offsets_[i + 1]; ++e) {
      const Entry& en = entries_[e];
      const double xv = x[en.block](en.row, en.col);
      acc += (en.row == en.col) ? en.value * xv : 2.0 * en.value * xv;
    }
    for (std::size_t e = free_offsets_[i]; e < free_offsets_[i + 1]; ++e)
      acc += free_entries_[e].second * f[free_entries_[e].first];
    out[i] = acc;
  }
}

void SdpProblem::apply_adjoint(const Eigen::VectorXd& y,
                               std::vector<Eigen::MatrixXd>& x,
                               Eigen::VectorXd& f) const {
  const int nb = n_blocks();
#pragma omp parallel for schedule(dynamic)
  for (int b = 0; b < nb; ++b) {
    x[b].setZero();
    for (const auto& t : block_transpose_[b]) {
      const double v = y[t.constraint] * t.value;
      x[b](t.row, t.col) += v;
      if (t.row != t.col) x[b](t.col, t.row) += v;
    }
  }
  f.setZero(n_free_);
  const int m = n_constraints();
  for (int i = 0; i < m; ++i)
    for (std::size_t e = free_offsets_[i]; e < free_offsets_[i + 1]; ++e)
      f[free_entries_[e].first] += free_entries_[e].second * y[i];
}

Eigen::VectorXd SdpProblem::gram_diagonal() const {
  const int m = n_constraints();
  Eigen::VectorXd d(m);
  for (int i = 0; i < m; ++i) {
    double acc = 0.0;
    for (std::size_t e = row_offsets_[i]; e < row_offsets_[i + 1]; ++e) {
      const Entry& en = entries_[e];
      acc += (en.row == en.col) ? en.value * en.value
                                : 2.0 * en.value * en.value;
    }
    for (std::size_t e = free_offsets_[i]; e < free_offsets_[i + 1]; ++e)
      acc += free_entries_[e].second * free_entries_[e].second;
    d[i] = acc;
  }
  return d;
}

double SdpProblem::constraint_dot_x(int i,
                                    const std::vector<Eigen::MatrixXd>& x) const {
  double acc = 0.0;
  for (std::size_t e = row_offsets_[i]; e < row_offsets_[i + 1]; ++e) {
    const Entry& en = entries_[e];
    const double xv = x[en.block](en.row, en.col);
    acc += (en.row == en.col) ? en.value * xv : 2.0 * en.value * xv;
  }
  return acc;
}

void SdpProblem::write_text(std::ostream& os) const {
  os << "sdp " << blocks_.size() << " " << rhs_.size() << " " << n_free_ << "\n";
  for (const auto& b : blocks_) os << "block " << b.name << " " << b.dim << "\n";
  char buf[40];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  for (int b = 0; b < n_blocks(); ++b)
    for (int r = 0; r < blocks_[b].dim; ++r)
      for (int c = r; c < blocks_[b].dim; ++c)
        if (objective_[b](r, c) != 0.0)
          os << "obj " << b << " " << r << " " << c << " "
             << num(objective_[b](r, c)) << "\n";
  for (int k = 0; k < n_free_; ++k)
    if (free_objective_.size() == n_free_ && free_objective_[k] != 0.0)
      os << "fobj " << k << " " << num(free_objective_[k]) << "\n";
  if (!finalized_)
    throw std::logic_error("sdp: write_text requires a finalized problem");
  for (std::size_t i = 0; i < rhs_.size(); ++i) {
    os << "rhs " << i << " " << num(rhs_[i]) << "\n";
    const auto [eb, ee] = row(static_cast<int>(i));
    for (const auto* e = eb; e != ee; ++e)
      os << "a " << i << " " << e->block << " " << e->row << " " << e->col
         << " " << num(e->value) << "\n";
    const auto [fb, fe] = free_row(static_cast<int>(i));
    for (const auto* e = fb; e != fe; ++e)
      os << "fa " << i << " " << e->first << " " << num(e->second) << "\n";
  }
}

SdpProblem SdpProblem::read_text(std::istream& is) {
  SdpProblem p;
  std::string tag;
  int nb = 0, m = 0, nf = 0;
  if (!(is >> tag >> nb >> m >> nf) || tag != "sdp")
    throw std::runtime_error("sdp text: bad header");
  for (int k = 0; k < nf; ++k) p.add_free_variable();
  Eigen::VectorXd fobj = Eigen::VectorXd::Zero(nf);
  int constraints_added = 0;
  while (is >> tag) {
    if (tag == "block") {
      std::string name;
      int dim;
      is >> name >> dim;
      p.add_block(name, dim);
    } else if (tag == "obj") {
      int b, r, c;
      double v;
      is >> b >> r >> c >> v;
      p.objective_[b](r, c) = v;
      p.objective_[b](c, r) = v;
    } else if (tag == "fobj") {
      int k;
      double v;
      is >> k >> v;
      fobj[k] = v;
    } else if (tag == "rhs") {
      int i;
      double v;
      is >> i >> v;
      while (constraints_added <= i) {
        p.add_constraint(0.0);
        ++constraints_added;
      }
      p.rhs_[i] = v;
    } else if (tag == "a") {
      int i, b, r, c;
      double v;
      is >> i >> b >> r >> c >> v;
      // stored values already carry the half-weight convention
      p.row_entries_[i].push_back({static_cast<std::int32_t>(b),
                                   static_cast<std::int32_t>(r),
                                   static_cast<std::int32_t>(c), v});
    } else if (tag == "fa") {
      int i, k;
      double v;
      is >> i >> k >> v;
      p.row_free_[i].push_back({static_cast<std::int32_t>(k), v});
    } else {
      throw std::runtime_error("sdp text: unknown tag " + tag);
    }
  }
  p.set_free_objective(fobj);
  return p;
}

} // namespace vrdm
