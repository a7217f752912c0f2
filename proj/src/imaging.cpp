#include "statcut/imaging.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>

#include <json.hpp>

#include "statcut/errors.hpp"

namespace statcut {

namespace {

// Skips whitespace and '#' comments between PNM header tokens.
void skip_pnm_space(std::istream& in) {
  while (true) {
    const int ch = in.peek();
    if (ch == '#') {
      std::string discard;
      std::getline(in, discard);
    } else if (ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r') {
      in.get();
    } else {
      return;
    }
  }
}

long read_pnm_int(std::istream& in, const char* what) {
  skip_pnm_space(in);
  long v = -1;
  if (!(in >> v) || v < 0) throw IoError(std::string("PGM: bad ") + what);
  return v;
}

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

ImageGrid read_png(const std::filesystem::path& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw IoError("cannot open " + path.string());
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("libpng: out of memory");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("libpng: out of memory");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("corrupt PNG: " + path.string());
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);

  const auto color = png_get_color_type(png, info);
  const auto depth = png_get_bit_depth(png, info);
  if (depth == 16) png_set_strip_16(png);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  if (color == PNG_COLOR_TYPE_RGB || color == PNG_COLOR_TYPE_RGB_ALPHA || color == PNG_COLOR_TYPE_PALETTE)
    png_set_rgb_to_gray_fixed(png, 1, -1, -1);
  png_read_update_info(png, info);

  const png_uint_32 width = png_get_image_width(png, info);
  const png_uint_32 height = png_get_image_height(png, info);
  const std::size_t rowbytes = png_get_rowbytes(png, info);
  std::vector<png_byte> data(rowbytes * height);
  std::vector<png_bytep> rows(height);
  for (png_uint_32 r = 0; r < height; ++r) rows[r] = data.data() + r * rowbytes;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  ImageGrid img(height, width);
  for (png_uint_32 r = 0; r < height; ++r)
    for (png_uint_32 c = 0; c < width; ++c) img(r, c) = rows[r][c] / 255.0;
  return img;
}

void write_png_gray8(const std::filesystem::path& path, const Eigen::Array<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic,
                                                                           Eigen::RowMajor>& pixels) {
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw IoError("cannot write " + path.string());
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("libpng: out of memory");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("libpng: out of memory");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("failed writing PNG: " + path.string());
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(pixels.cols()), static_cast<png_uint_32>(pixels.rows()), 8,
               PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  std::vector<png_byte> row(static_cast<std::size_t>(pixels.cols()));
  for (Index r = 0; r < pixels.rows(); ++r) {
    for (Index c = 0; c < pixels.cols(); ++c) row[static_cast<std::size_t>(c)] = pixels(r, c);
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace

ImageGrid read_pgm(std::istream& in) {
  char magic[2] = {0, 0};
  if (!in.read(magic, 2) || magic[0] != 'P' || (magic[1] != '2' && magic[1] != '5'))
    throw IoError("not a grayscale PGM (expected P2 or P5)");
  const long width = read_pnm_int(in, "width");
  const long height = read_pnm_int(in, "height");
  const long maxval = read_pnm_int(in, "maxval");
  if (width == 0 || height == 0) throw IoError("PGM: empty image");
  if (maxval == 0 || maxval > 65535) throw IoError("PGM: maxval out of range");

  ImageGrid img(height, width);
  if (magic[1] == '2') {
    for (long r = 0; r < height; ++r)
      for (long c = 0; c < width; ++c) {
        long v = -1;
        if (!(in >> v)) throw IoError("PGM: truncated pixel data");
        if (v < 0 || v > maxval) throw IoError("PGM: pixel value out of range");
        img(r, c) = static_cast<double>(v) / static_cast<double>(maxval);
      }
    return img;
  }

  in.get();  // single whitespace before raster
  const int bytes = maxval < 256 ? 1 : 2;
  std::vector<unsigned char> raster(static_cast<std::size_t>(width * height * bytes));
  if (!in.read(reinterpret_cast<char*>(raster.data()), static_cast<std::streamsize>(raster.size())))
    throw IoError("PGM: truncated pixel data");
  for (long r = 0; r < height; ++r)
    for (long c = 0; c < width; ++c) {
      const std::size_t k = static_cast<std::size_t>((r * width + c) * bytes);
      const long v = bytes == 1 ? raster[k] : (raster[k] << 8) | raster[k + 1];
      if (v > maxval) throw IoError("PGM: pixel value out of range");
      img(r, c) = static_cast<double>(v) / static_cast<double>(maxval);
    }
  return img;
}

ImageGrid load_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  unsigned char sig[8] = {};
  in.read(reinterpret_cast<char*>(sig), 8);
  const auto got = in.gcount();
  if (got >= 8 && png_sig_cmp(sig, 0, 8) == 0) {
    in.close();
    return read_png(path);
  }
  if (got >= 2 && sig[0] == 'P') {
    in.clear();
    in.seekg(0);
    return read_pgm(in);
  }
  throw IoError("unsupported image format: " + path.string());
}

MaskGrid load_mask(const std::filesystem::path& path) {
  const ImageGrid img = load_image(path);
  return (img >= 0.5).cast<std::uint8_t>();
}

void save_mask_png(const std::filesystem::path& path, const MaskGrid& mask) {
  write_png_gray8(path, (mask != 0).cast<std::uint8_t>() * std::uint8_t{255});
}

void save_image_png(const std::filesystem::path& path, const ImageGrid& image) {
  write_png_gray8(path, (image.cwiseMax(0.0).cwiseMin(1.0) * 255.0).round().cast<std::uint8_t>());
}

void save_mask_text(const std::filesystem::path& path, const MaskGrid& mask) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  for (Index r = 0; r < mask.rows(); ++r) {
    for (Index c = 0; c < mask.cols(); ++c) out << (c ? " " : "") << (mask(r, c) ? 1 : 0);
    out << '\n';
  }
  if (!out) throw IoError("failed writing " + path.string());
}

Labeling mask_to_labeling(const MaskGrid& mask) {
  Labeling x(static_cast<std::size_t>(mask.size()));
  for (Index i = 0; i < mask.size(); ++i) x[i] = mask.data()[i] ? 1 : 0;
  return x;
}

MaskGrid labeling_to_mask(const Labeling& labeling, Index rows, Index cols) {
  if (static_cast<Index>(labeling.size()) != rows * cols) throw DimensionError("labeling does not match mask shape");
  MaskGrid mask(rows, cols);
  for (Index i = 0; i < mask.size(); ++i) mask.data()[i] = labeling[i] ? 1 : 0;
  return mask;
}

GroundTruthStats extract_stats(const MaskGrid& mask, Index tile_rows, Index tile_cols) {
  GroundTruthStats s;
  s.rows = mask.rows();
  s.cols = mask.cols();
  s.tile_rows = tile_rows;
  s.tile_cols = tile_cols;
  const std::uint8_t* px = mask.data();

  double sum_h = 0.0, sum_v = 0.0;
  for (Index r = 0; r < s.rows; ++r)
    for (Index c = 0; c < s.cols; ++c)
      if (mask(r, c)) {
        s.size += 1.0;
        sum_h += static_cast<double>(c);
        sum_v += static_cast<double>(r);
      }
  for (const auto& [i, j] : grid_edges(s.rows, s.cols))
    if ((px[i] != 0) != (px[j] != 0)) s.boundary += 1.0;

  if (s.size > 0.0) {
    const double mh = sum_h / s.size;
    const double mv = sum_v / s.size;
    double vh = 0.0, vv = 0.0, cv = 0.0;
    for (Index r = 0; r < s.rows; ++r)
      for (Index c = 0; c < s.cols; ++c)
        if (mask(r, c)) {
          const double dh = static_cast<double>(c) - mh;
          const double dv = static_cast<double>(r) - mv;
          vh += dh * dh;
          vv += dv * dv;
          cv += dh * dv;
        }
    s.mean_h = mh;
    s.mean_v = mv;
    s.var_h = vh / s.size;
    s.var_v = vv / s.size;
    s.covariance = cv / s.size;
  }

  if (tile_rows > 0 && tile_cols > 0 && tile_rows <= s.rows && tile_cols <= s.cols) {
    for (const Tile& t : equal_tiling(s.rows, s.cols, tile_rows, tile_cols)) {
      double n = 0.0;
      for (Index r = t.row0; r < t.row0 + t.height; ++r)
        for (Index c = t.col0; c < t.col0 + t.width; ++c) n += mask(r, c) ? 1.0 : 0.0;
      s.tile_sizes.push_back(n);
    }
  }
  return s;
}

Interval relative_bounds(std::optional<double> stat, double p) {
  if (!stat) throw InvalidArgument("statistic is undefined (empty foreground)");
  if (p < 0.0) throw InvalidArgument("relative gap must be non-negative");
  const double a = (1.0 - p) * *stat;
  const double b = (1.0 + p) * *stat;
  return {std::min(a, b), std::max(a, b)};
}

double bound_deviation(double a, double b, double c, bool* degenerate) {
  if (degenerate) *degenerate = false;
  if (c >= a && c <= b) return 0.0;
  const double dist = std::min(std::abs(c - a), std::abs(c - b));
  const double denom = (a + b) / 2.0;
  if (denom == 0.0) {
    if (degenerate) *degenerate = true;
    return dist;
  }
  return dist / std::abs(denom);
}

MetricsReport metrics(const Labeling& pred, const Labeling& gt, const ConstraintSet& set,
                      const std::vector<std::optional<double>>& achieved) {
  if (pred.size() != gt.size()) throw DimensionError("prediction and ground truth differ in size");
  if (static_cast<Index>(achieved.size()) != set.size())
    throw DimensionError("achieved statistics do not match the constraint set");
  MetricsReport report;
  if (!pred.empty()) {
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) wrong += (pred[i] != 0) != (gt[i] != 0) ? 1 : 0;
    report.er = 100.0 * static_cast<double>(wrong) / static_cast<double>(pred.size());
  }
  if (set.empty()) return report;

  double unsatisfied = 0.0;
  double deviation_sum = 0.0;
  for (Index k = 0; k < set.size(); ++k) {
    const Constraint& c = set[k];
    const auto& h = achieved[static_cast<std::size_t>(k)];
    double dev = 1.0;
    if (h) {
      bool degenerate = false;
      dev = bound_deviation(c.lower, c.upper, *h, &degenerate);
      report.degenerate_denominator = report.degenerate_denominator || degenerate;
    }
    const double tol = 1e-9 * (1.0 + std::abs(c.lower) + std::abs(c.upper));
    const bool inside = h && *h >= c.lower - tol && *h <= c.upper + tol;
    if (!inside) unsatisfied += 1.0;
    report.deviations.push_back(dev);
    deviation_sum += dev;
  }
  const double m = static_cast<double>(set.size());
  report.er_a = 100.0 * unsatisfied / m;
  report.er_b = deviation_sum / m;
  return report;
}

std::string to_json(const GroundTruthStats& s, int indent) {
  using nlohmann::json;
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json j = {{"rows", s.rows},
            {"cols", s.cols},
            {"size", s.size},
            {"boundary_length", s.boundary},
            {"mean_h", opt(s.mean_h)},
            {"mean_v", opt(s.mean_v)},
            {"var_h", opt(s.var_h)},
            {"var_v", opt(s.var_v)},
            {"covariance", opt(s.covariance)},
            {"tile_rows", s.tile_rows},
            {"tile_cols", s.tile_cols},
            {"tile_sizes", s.tile_sizes}};
  return j.dump(indent);
}

std::string to_json(const MetricsReport& r, int indent) {
  nlohmann::json j = {{"er", r.er},
                      {"er_a", r.er_a},
                      {"er_b", r.er_b},
                      {"runtime_seconds", r.runtime},
                      {"iterations", r.iterations},
                      {"deviations", r.deviations},
                      {"degenerate_denominator", r.degenerate_denominator}};
  return j.dump(indent);
}

}  // namespace statcut
