#ifndef ADREPLAY_ADSCAN_GALLERY_H_
#define ADREPLAY_ADSCAN_GALLERY_H_

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adreplay/adscan/classify.h"
#include "adreplay/warc/capture_record.h"

namespace adreplay::adscan {

struct GalleryItem {
  AdResource resource;
  std::string urim;  // id_ memento on the replay service
  std::string page;  // relative path of the item page
};

struct Gallery {
  std::string seed_url;
  std::string seed_key;
  std::string replay_base;
  // Grouped by ad type (image, video, embedded web page), then key and
  // timestamp.
  std::vector<GalleryItem> items;
};

inline constexpr std::string_view kDefaultGalleryReplayBase = "http://127.0.0.1:8080/web/";

// Every successful HTML, image and video capture in `sources` except the
// seed page and invisible assets. Throws warc::WarcError when a source
// cannot be read completely.
Gallery BuildGallery(std::span<const warc::ArchiveSource> sources, std::string_view seed_url,
                     std::string_view replay_base = kDefaultGalleryReplayBase);

// Writes manifest.json, index.html and items/NNNN.html under `out_dir`.
void WriteGallery(const Gallery& gallery, const std::filesystem::path& out_dir);

std::string GalleryManifestJson(const Gallery& gallery);

// BuildGallery over one WARC file followed by WriteGallery.
Gallery EmitGallery(const std::filesystem::path& warc_path, std::string_view seed_url,
                    const std::filesystem::path& out_dir,
                    std::string_view replay_base = kDefaultGalleryReplayBase);

}  // namespace adreplay::adscan

#endif  // ADREPLAY_ADSCAN_GALLERY_H_
