#include "lfc/container.hpp"

#include <cmath>
#include <string>

#include "lfc/error.hpp"

namespace lfc {

namespace {

constexpr std::string_view kModule = "container";
constexpr uint8_t kFlagBasis = 0x01;

}  // namespace

void writeFrameMetadata(ByteWriter& out, const FrameMetadata& meta) {
  out.u8(meta.planes);
  out.u8(static_cast<uint8_t>(meta.bitDepth));
  out.u8(static_cast<uint8_t>(meta.primaries));
  out.f64(meta.ptf.a());
  out.f64(meta.ptf.c());
  out.f64(meta.ptf.lowBreak());
  out.f64(meta.ptf.midBreak());
  out.f64(meta.ptf.highBreak());
  out.f64(meta.intensity.offset);
  out.f64(meta.intensity.scale);
  for (const auto& c : meta.chroma) {
    out.f64(c.lambda);
    out.f64(c.min);
    out.f64(c.max);
    out.f64(c.objective);
  }
}

FrameMetadata readFrameMetadata(ByteReader& in) {
  FrameMetadata meta;
  meta.planes = in.u8();
  meta.bitDepth = in.u8();
  const uint8_t primaries = in.u8();
  if (meta.planes != 1 && meta.planes != 3) fail(ErrorKind::kFormat, kModule, "bad plane count");
  if (primaries > 1) fail(ErrorKind::kFormat, kModule, "bad primaries id");
  meta.primaries = static_cast<Primaries>(primaries);
  const double a = in.f64();
  const double c = in.f64();
  const double lo = in.f64();
  const double mid = in.f64();
  const double hi = in.f64();
  try {
    validateBitDepth(meta.bitDepth);
    meta.ptf = PtfParams::fromAnchors(a, c, lo, mid, hi);
  } catch (const Error& e) {
    fail(ErrorKind::kFormat, kModule, std::string("bad frame metadata: ") + e.what());
  }
  meta.intensity.offset = in.f64();
  meta.intensity.scale = in.f64();
  if (!std::isfinite(meta.intensity.offset) || !(meta.intensity.scale > 0.0) ||
      !std::isfinite(meta.intensity.scale)) {
    fail(ErrorKind::kFormat, kModule, "bad intensity mapping");
  }
  for (auto& ch : meta.chroma) {
    ch.lambda = in.f64();
    ch.min = in.f64();
    ch.max = in.f64();
    ch.objective = in.f64();
    if (meta.planes == 3 &&
        (!(ch.lambda >= kLambdaMin - 1e-12 && ch.lambda <= kLambdaMax + 1e-12) ||
         !(ch.max > ch.min) || !std::isfinite(ch.max) || !std::isfinite(ch.min))) {
      fail(ErrorKind::kFormat, kModule, "bad chroma metadata");
    }
  }
  return meta;
}

std::vector<uint8_t> writeContainer(const Container& c) {
  const ContainerHeader& h = c.header;
  require(c.patterns.size() == h.frames && c.frames.size() == h.frames, kModule,
          "frame count mismatch");
  require(c.channels.size() == size_t{h.frames} * h.planes, kModule, "channel count mismatch");
  ByteWriter out;
  out.tag("LFC4");
  out.u8(kContainerVersion);
  out.u8(c.basis ? kFlagBasis : 0);
  out.u32(h.width);
  out.u32(h.height);
  out.u8(h.planes);
  out.u16(h.frames);
  out.u16(h.rows);
  out.u16(h.cols);
  out.u8(h.dLevel);
  out.u8(h.bitDepth);
  out.f64(h.quantStep);
  out.f64(h.ridge);
  out.u32(h.paddedWidth);
  out.u32(h.paddedHeight);
  out.u32(h.blocksPerPlane);
  for (const auto& p : c.patterns) {
    require(p.rows() == h.rows && p.cols() == h.cols, kModule, "pattern grid mismatch");
    for (double v : p.values()) out.f64(v);
  }
  if (c.basis) {
    const auto& w = c.basis->matrix();
    out.u16(static_cast<uint16_t>(w.cols()));
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index k = 0; k < w.cols(); ++k) out.f64(w(r, k));
    }
  }
  for (const auto& meta : c.frames) writeFrameMetadata(out, meta);
  for (const auto& ch : c.channels) writeChannelStream(out, ch);
  return out.take();
}

Container readContainer(std::span<const uint8_t> bytes) {
  ByteReader in(bytes);
  in.expectTag("LFC4");
  const uint8_t version = in.u8();
  if (version != kContainerVersion) {
    fail(ErrorKind::kFormat, kModule,
         "version mismatch: file " + std::to_string(version) + ", reader " +
             std::to_string(kContainerVersion));
  }
  const uint8_t flags = in.u8();
  if (flags & ~kFlagBasis) fail(ErrorKind::kFormat, kModule, "unknown header flags");
  Container c;
  ContainerHeader& h = c.header;
  h.width = in.u32();
  h.height = in.u32();
  h.planes = in.u8();
  h.frames = in.u16();
  h.rows = in.u16();
  h.cols = in.u16();
  h.dLevel = in.u8();
  h.bitDepth = in.u8();
  h.quantStep = in.f64();
  h.ridge = in.f64();
  h.paddedWidth = in.u32();
  h.paddedHeight = in.u32();
  h.blocksPerPlane = in.u32();

  if (h.width == 0 || h.height == 0 || (h.planes != 1 && h.planes != 3) || h.frames == 0 ||
      h.rows == 0 || h.cols == 0 || h.frames > size_t{h.rows} * h.cols) {
    fail(ErrorKind::kFormat, kModule, "bad header geometry");
  }
  if (h.dLevel < kMinDistortion || h.dLevel > kMaxDistortion || !(h.quantStep > 0.0) ||
      !std::isfinite(h.quantStep) || !(h.ridge >= 0.0) || !std::isfinite(h.ridge)) {
    fail(ErrorKind::kFormat, kModule, "bad quantization parameters");
  }
  if (h.paddedWidth != paddedExtent(h.width) || h.paddedHeight != paddedExtent(h.height) ||
      h.blocksPerPlane != (h.paddedWidth / kTileEdge) * (h.paddedHeight / kTileEdge)) {
    fail(ErrorKind::kFormat, kModule, "inconsistent block geometry");
  }

  const size_t views = size_t{h.rows} * h.cols;
  try {
    for (uint16_t n = 0; n < h.frames; ++n) {
      std::vector<double> v(views);
      for (double& x : v) x = in.f64();
      c.patterns.emplace_back(h.rows, h.cols, std::move(v));
    }
    if (flags & kFlagBasis) {
      const uint16_t rank = in.u16();
      Eigen::MatrixXd w(static_cast<Eigen::Index>(views), rank);
      for (Eigen::Index r = 0; r < w.rows(); ++r) {
        for (Eigen::Index k = 0; k < w.cols(); ++k) w(r, k) = in.f64();
      }
      c.basis.emplace(std::move(w));
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kFormat) throw;
    fail(ErrorKind::kFormat, kModule, std::string("bad acquisition data: ") + e.what());
  }
  for (uint16_t n = 0; n < h.frames; ++n) {
    c.frames.push_back(readFrameMetadata(in));
    if (c.frames.back().planes != h.planes || c.frames.back().bitDepth != h.bitDepth) {
      fail(ErrorKind::kFormat, kModule, "frame metadata disagrees with header");
    }
  }
  const size_t streams = size_t{h.frames} * h.planes;
  for (size_t i = 0; i < streams; ++i) {
    c.channels.push_back(readChannelStream(in));
    if (c.channels.back().channelId != i || c.channels.back().blockCount != h.blocksPerPlane) {
      fail(ErrorKind::kFormat, kModule, "channel stream " + std::to_string(i) + " is inconsistent");
    }
  }
  if (in.remaining() != 0) fail(ErrorKind::kFormat, kModule, "trailing bytes after last stream");
  return c;
}

}  // namespace lfc
