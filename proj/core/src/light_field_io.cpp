#include "lfc/light_field_io.hpp"

#include <fstream>
#include <iterator>

#include "lfc/error.hpp"
#include "lfc/pfm.hpp"

namespace lfc {

namespace {
constexpr std::string_view kModule = "lf-model";

void replaceAll(std::string& s, std::string_view from, const std::string& to) {
  for (size_t pos = s.find(from); pos != std::string::npos;
       pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
}
}  // namespace

std::string formatViewPath(const std::string& pathTemplate, size_t s, size_t t) {
  std::string path = pathTemplate;
  replaceAll(path, "{s}", std::to_string(s));
  replaceAll(path, "{t}", std::to_string(t));
  return path;
}

LightField4D loadLightField(const std::string& pathTemplate, size_t rows, size_t cols,
                            const ViewSelection& selection) {
  require(rows > 0 && cols > 0, kModule, "view grid must be non-empty");
  require(selection.step > 0, kModule, "view step must be positive");
  std::vector<HdrImage> views;
  views.reserve(rows * cols);
  for (size_t s = 0; s < rows; ++s) {
    for (size_t t = 0; t < cols; ++t) {
      const size_t fs = selection.firstRow + s * selection.step;
      const size_t ft = selection.firstCol + t * selection.step;
      const std::filesystem::path path = formatViewPath(pathTemplate, fs, ft);
      if (!std::filesystem::exists(path)) {
        fail(ErrorKind::kIo, kModule,
             "missing view (" + std::to_string(fs) + "," + std::to_string(ft) +
                 "): " + path.string());
      }
      views.push_back(loadPfm(path));
      if (!views.back().sameShape(views.front())) {
        fail(ErrorKind::kInvalidArgument, kModule,
             "view (" + std::to_string(fs) + "," + std::to_string(ft) +
                 ") dimensions differ from the first view");
      }
    }
  }
  return LightField4D(rows, cols, std::move(views));
}

void saveLightField(const LightField4D& lf, const std::string& pathTemplate) {
  for (size_t s = 0; s < lf.angularRows(); ++s) {
    for (size_t t = 0; t < lf.angularCols(); ++t) {
      savePfm(lf.view(s, t), formatViewPath(pathTemplate, s, t));
    }
  }
}

std::vector<uint8_t> readFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, "io", "cannot open " + path.string());
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  if (in.bad()) fail(ErrorKind::kIo, "io", "read failed: " + path.string());
  return bytes;
}

void writeFileBytes(const std::filesystem::path& path, std::span<const uint8_t> bytes) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::kIo, "io", "cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::kIo, "io", "write failed: " + path.string());
}

}  // namespace lfc
