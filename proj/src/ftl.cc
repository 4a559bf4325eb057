#include "ssdlab/ftl.h"

#include <cmath>

#include "ssdlab/errors.h"
#include "ssdlab/oracle.h"

namespace ssdlab {

uint64_t DeviceGeometry::user_page_budget() const {
    return static_cast<uint64_t>((1.0 - s_f) * static_cast<double>(total_pages()));
}

void DeviceGeometry::validate() const {
    if (n_blocks < 2)
        throw UsageError("device needs at least 2 blocks");
    if (n_p < 1)
        throw UsageError("device needs at least 1 page per block");
    if (!(s_f >= 0.0) || s_f >= 1.0)
        throw UsageError("spare factor must lie in [0, 1)");
    // At least one block of true spare, or GC has no room to operate.
    if (user_page_budget() > total_pages() - n_p)
        throw UsageError("spare factor leaves less than one spare block");
}

Ftl::Ftl(const DeviceGeometry& geo) : geo_(geo) {
    geo_.validate();
    page_state_.assign(geo_.total_pages(), PageState::Free);
    page_owner_.assign(geo_.total_pages(), 0);
    block_valid_.assign(geo_.n_blocks, 0);
    block_free_.assign(geo_.n_blocks, 1);
    for (uint32_t b = 0; b < geo_.n_blocks; ++b)
        free_blocks_.push_back(b);
}

bool Ftl::is_mapped(uint32_t id) const {
    return id < map_.size() && map_[id].length != 0;
}

std::optional<Ftl::Run> Ftl::object_location(uint32_t id) const {
    if (!is_mapped(id))
        return std::nullopt;
    return map_[id];
}

void Ftl::write_object(uint32_t id, uint32_t size) {
    if (size == 0 || size > geo_.n_p || geo_.n_p % size != 0)
        throw ContractViolation("object size must divide the block size");
    if (id == 0)
        throw ContractViolation("object ids start at 1");
    if (id >= map_.size())
        map_.resize(id + 1, Run{0, 0, 0});
    invalidate(id);  // a rewrite drops its old pages before placement
    append_run(id, size, /*for_gc=*/false);
    user_writes_ += size;
}

void Ftl::trim_object(uint32_t id) {
    if (!is_mapped(id))
        throw ContractViolation("trim of an unmapped object");
    invalidate(id);
}

void Ftl::invalidate(uint32_t id) {
    Run& r = map_[id];
    if (r.length == 0)
        return;
    for (uint32_t i = 0; i < r.length; ++i)
        page_state_[r.start_page + i] = PageState::Invalid;
    block_valid_[r.block] -= r.length;
    valid_total_ -= r.length;
    invalid_total_ += r.length;
    r.length = 0;
}

void Ftl::open_frontier() {
    if (free_blocks_.empty()) {
        // Unreachable by construction (GC starts with >= 1 free block and any
        // victim fits into one fresh block), but a hard error beats silence.
        throw CapacityError("garbage collection starved of free blocks");
    }
    frontier_block_ = free_blocks_.front();
    free_blocks_.pop_front();
    block_free_[frontier_block_] = 0;
    frontier_next_ = 0;
}

bool Ftl::frontier_has_room(uint32_t size) const {
    return frontier_block_ != kNoBlock && frontier_next_ + size <= geo_.n_p;
}

void Ftl::append_run(uint32_t id, uint32_t size, bool for_gc) {
    if (!frontier_has_room(size)) {
        if (!for_gc) {
            // A fresh frontier block is needed: run greedy GC until at least
            // one free block will remain after taking it. GC copies share the
            // log frontier, so the frontier may have moved (and gained room)
            // by the time the loop exits -- re-check before popping.
            while (free_blocks_.size() < 2)
                gc_once();
        }
        // Any unwritten tail pages of a closed block stay Free until its
        // erase (only possible under mixed run sizes).
        if (!frontier_has_room(size))
            open_frontier();
    }
    uint64_t start = static_cast<uint64_t>(frontier_block_) * geo_.n_p + frontier_next_;
    for (uint32_t i = 0; i < size; ++i) {
        page_state_[start + i] = PageState::Valid;
        page_owner_[start + i] = id;
    }
    map_[id] = Run{frontier_block_, start, size};
    block_valid_[frontier_block_] += size;
    valid_total_ += size;
    frontier_next_ += size;
}

void Ftl::gc_once() {
    // Greedy victim: fewest valid pages over closed, non-frontier blocks;
    // ties go to the lowest index.
    uint32_t victim = kNoBlock;
    uint32_t best = UINT32_MAX;
    for (uint32_t b = 0; b < geo_.n_blocks; ++b) {
        if (b == frontier_block_ || block_free_[b])
            continue;
        if (block_valid_[b] < best) {
            best = block_valid_[b];
            victim = b;
        }
    }
    if (victim == kNoBlock || best >= geo_.n_p)
        throw CapacityError("no reclaimable block: device is fully valid");

    // Move every surviving run off the victim, object-atomically.
    uint64_t base = static_cast<uint64_t>(victim) * geo_.n_p;
    for (uint32_t off = 0; off < geo_.n_p;) {
        if (page_state_[base + off] != PageState::Valid) {
            ++off;
            continue;
        }
        uint32_t id = page_owner_[base + off];
        Run run = map_[id];  // run.start_page == base + off by construction
        for (uint32_t i = 0; i < run.length; ++i)
            page_state_[run.start_page + i] = PageState::Invalid;
        block_valid_[victim] -= run.length;
        valid_total_ -= run.length;
        invalid_total_ += run.length;
        append_run(id, run.length, /*for_gc=*/true);
        gc_copies_ += run.length;
        off += run.length;
    }
    erase_block(victim);
}

void Ftl::erase_block(uint32_t b) {
    uint64_t base = static_cast<uint64_t>(b) * geo_.n_p;
    for (uint32_t i = 0; i < geo_.n_p; ++i) {
        if (page_state_[base + i] == PageState::Invalid)
            invalid_total_ -= 1;
        page_state_[base + i] = PageState::Free;
    }
    block_valid_[b] = 0;
    block_free_[b] = 1;
    free_blocks_.push_back(b);
    erases_ += 1;
}

void Ftl::audit() const {
    uint64_t valid = 0, invalid = 0, free = 0;
    for (uint32_t b = 0; b < geo_.n_blocks; ++b) {
        uint32_t block_valid = 0;
        uint64_t base = static_cast<uint64_t>(b) * geo_.n_p;
        for (uint32_t i = 0; i < geo_.n_p; ++i) {
            switch (page_state_[base + i]) {
                case PageState::Valid:
                    ++block_valid;
                    ++valid;
                    break;
                case PageState::Invalid:
                    ++invalid;
                    break;
                case PageState::Free:
                    ++free;
                    break;
            }
        }
        if (block_valid != block_valid_[b])
            throw ContractViolation("audit: per-block valid counter drifted");
        if (block_free_[b] && block_valid != 0)
            throw ContractViolation("audit: free block holds valid pages");
    }
    if (valid != valid_total_ || invalid != invalid_total_)
        throw ContractViolation("audit: global page counters drifted");
    if (valid + invalid + free != geo_.total_pages())
        throw ContractViolation("audit: page conservation violated");

    uint64_t mapped_pages = 0;
    for (uint32_t id = 0; id < map_.size(); ++id) {
        const Run& r = map_[id];
        if (r.length == 0)
            continue;
        if (r.start_page / geo_.n_p != r.block ||
            (r.start_page % geo_.n_p) + r.length > geo_.n_p)
            throw ContractViolation("audit: run escapes its block");
        for (uint32_t i = 0; i < r.length; ++i) {
            if (page_state_[r.start_page + i] != PageState::Valid ||
                page_owner_[r.start_page + i] != id)
                throw ContractViolation("audit: mapped run not fully valid");
        }
        mapped_pages += r.length;
    }
    if (mapped_pages != valid_total_)
        throw ContractViolation("audit: mapped pages != valid pages");
}

WaMeasurement run_wa_experiment(const DeviceGeometry& geo, const WorkloadParams& params,
                                uint64_t warmup_user_writes, uint64_t measure_user_writes,
                                Rng& rng) {
    geo.validate();
    params.validate();
    if (measure_user_writes < 1)
        throw UsageError("measurement window must cover at least one page write");
    if (static_cast<uint64_t>(params.u) * params.size_dist.max_pages() > geo.user_page_budget())
        throw CapacityError("workload oversubscribes the user page budget");

    Ftl ftl(geo);
    ObjectState state(params.u);

    while (ftl.user_page_writes() < warmup_user_writes) {
        Request req = next_request(params, state, rng);
        state.apply(req);
        if (req.kind == Request::Write)
            ftl.write_object(req.object_id, req.size_pages);
        else
            ftl.trim_object(req.object_id);
    }

    uint64_t user0 = ftl.user_page_writes();
    uint64_t gc0 = ftl.gc_page_copies();
    while (ftl.user_page_writes() - user0 < measure_user_writes) {
        Request req = next_request(params, state, rng);
        state.apply(req);
        if (req.kind == Request::Write)
            ftl.write_object(req.object_id, req.size_pages);
        else
            ftl.trim_object(req.object_id);
    }

    WaMeasurement out;
    out.warmup_user_writes = user0;
    out.measured_user_writes = ftl.user_page_writes() - user0;
    out.measured_gc_copies = ftl.gc_page_copies() - gc0;
    out.write_amplification =
        static_cast<double>(out.measured_user_writes + out.measured_gc_copies) /
        static_cast<double>(out.measured_user_writes);
    return out;
}

}  // namespace ssdlab
