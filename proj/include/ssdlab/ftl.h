// Page-granular log-structured FTL with greedy garbage collection and Trim.
//
// Objects are stored as contiguous page runs confined to a single block
// (sizes must divide the block size). Writes append at a moving frontier;
// when a fresh frontier block is needed, greedy GC (victim = fewest valid
// pages, ties to the lowest index, never the frontier) runs until at least
// one free block remains after the placement. GC copies whole runs and they
// count toward write amplification; Trims program nothing.
#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "ssdlab/rng.h"
#include "ssdlab/workload.h"

namespace ssdlab {

struct DeviceGeometry {
    uint32_t n_blocks = 0;
    uint32_t n_p = 0;   // pages per block
    double s_f = 0.0;   // manufacturer spare factor (T - u)/T

    uint64_t total_pages() const { return static_cast<uint64_t>(n_blocks) * n_p; }
    // Pages the user may hold: floor((1 - S_f) * T).
    uint64_t user_page_budget() const;
    void validate() const;  // throws UsageError
};

enum class PageState : uint8_t { Free, Valid, Invalid };

class Ftl {
  public:
    explicit Ftl(const DeviceGeometry& geo);

    // Invalidates any previous run of id, then appends a new size_pages run
    // at the frontier (running GC first if a fresh block is needed).
    // size_pages must divide n_p.
    void write_object(uint32_t id, uint32_t size_pages);

    // Invalidates the run of a mapped id; programs nothing.
    void trim_object(uint32_t id);

    bool is_mapped(uint32_t id) const;

    struct Run {
        uint32_t block;
        uint64_t start_page;  // absolute page index
        uint32_t length;
    };
    std::optional<Run> object_location(uint32_t id) const;

    const DeviceGeometry& geometry() const { return geo_; }
    uint64_t user_page_writes() const { return user_writes_; }
    uint64_t gc_page_copies() const { return gc_copies_; }
    uint64_t erases() const { return erases_; }
    uint64_t valid_pages() const { return valid_total_; }
    uint64_t invalid_pages() const { return invalid_total_; }
    uint64_t free_pages() const { return geo_.total_pages() - valid_total_ - invalid_total_; }

    // Full bookkeeping audit: per-block valid counters vs page states, run
    // integrity (contiguous, single-block, all Valid), conservation
    // Free + Valid + Invalid = T. Throws ContractViolation on any mismatch.
    void audit() const;

  private:
    void invalidate(uint32_t id);
    void append_run(uint32_t id, uint32_t size, bool for_gc);
    void open_frontier();
    bool frontier_has_room(uint32_t size) const;
    void gc_once();
    void erase_block(uint32_t b);

    static constexpr uint32_t kNoBlock = UINT32_MAX;

    DeviceGeometry geo_;
    std::vector<PageState> page_state_;
    std::vector<uint32_t> page_owner_;       // object id, meaningful for Valid pages
    std::vector<uint32_t> block_valid_;
    std::vector<uint8_t> block_free_;        // 1 while the block sits in free_blocks_
    std::vector<Run> map_;                   // id-indexed; length 0 = unmapped
    std::deque<uint32_t> free_blocks_;       // FIFO for determinism
    uint32_t frontier_block_ = kNoBlock;
    uint32_t frontier_next_ = 0;             // next page offset within the frontier block
    uint64_t user_writes_ = 0;
    uint64_t gc_copies_ = 0;
    uint64_t erases_ = 0;
    uint64_t valid_total_ = 0;
    uint64_t invalid_total_ = 0;
};

struct WaMeasurement {
    double write_amplification = 0.0;
    uint64_t warmup_user_writes = 0;    // user page writes consumed warming up
    uint64_t measured_user_writes = 0;  // user page writes inside the window
    uint64_t measured_gc_copies = 0;    // GC page copies inside the window
};

// Drives the Trim-modified workload through an Ftl (with a lockstep
// ObjectState for Trim targeting). Warmup and measurement are denominated in
// user page writes; WA = (user + GC copies)/user over the window only.
// Requires u * B2 <= user page budget.
WaMeasurement run_wa_experiment(const DeviceGeometry& geo, const WorkloadParams& params,
                                uint64_t warmup_user_writes, uint64_t measure_user_writes,
                                Rng& rng);

}  // namespace ssdlab
