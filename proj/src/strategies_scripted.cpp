#include "posgame/counting.hpp"
#include "posgame/invariants.hpp"
#include "posgame/randmodels.hpp"
#include "posgame/strategies.hpp"
#include "pinned_enum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace posgame {

std::vector<Element> padding_offer(const GameState& s, Element* cursor, int bias)
{
    std::vector<Element> out;
    out.reserve(bias + 1);
    Element e = *cursor;
    while (out.size() < static_cast<size_t>(bias) + 1) {
        if (e >= s.owner.size())
            throw std::logic_error("padding: ran out of free elements");
        if (s.owner[e] == Owner::free_)
            out.push_back(e);
        ++e;
    }
    *cursor = out.front() + 1; // earlier ids are all claimed once offered
    return out;
}

// ---------------------------------------------------------------- tree plan

TreePlan::TreePlan(const Pattern& tree, int n)
{
    if (!tree.is_tree())
        throw std::invalid_argument("tree strategy: pattern is not a tree");
    k = tree.vertex_count;

    // peel the highest-labelled leaf repeatedly
    std::vector<int> deg = tree.degrees();
    std::vector<bool> gone(k, false);
    auto adj = tree.adjacency_masks();
    leaf_label.assign(std::max(k - 1, 0), 0);
    anchor_label.assign(std::max(k - 1, 0), 0);
    for (int j = k; j >= 2; --j) {
        int leaf = -1;
        for (int v = k - 1; v >= 0; --v)
            if (!gone[v] && deg[v] <= 1) {
                leaf = v;
                break;
            }
        int parent = -1;
        for (int w = 0; w < k; ++w)
            if (!gone[w] && w != leaf && (adj[leaf] & (1u << w))) {
                parent = w;
                break;
            }
        leaf_label[j - 2] = leaf;
        anchor_label[j - 2] = parent;
        gone[leaf] = true;
        if (parent >= 0)
            --deg[parent];
    }

    level_n.assign(k, 0);
    level_n[k - 1] = n;
    for (int j = k - 1; j >= 1; --j)
        level_n[j - 1] = (level_n[j] + 1) / 2;

    label_slot.assign(k, -1);
    for (int v = 0; v < k; ++v)
        if (!gone[v])
            label_slot[v] = 0; // the root
    for (int j = 2; j <= k; ++j)
        label_slot[leaf_label[j - 2]] = j - 1;
}

// ---------------------------------------------------------------- tree dense

TreeDenseWaiter::TreeDenseWaiter(const Board& board, int bias, const Pattern& tree, bool relax)
    : board_(&board)
    , bias_(bias)
    , plan_(tree, board.vertex_count)
{
    if (board.kind != Board::Kind::complete)
        throw std::invalid_argument("tree-dense: needs a complete board");
    const int k = plan_.k;
    if (!relax) {
        // admissible bias range of the dense recursion: b <= n / 2^{k+6}
        unsigned long long lhs = static_cast<unsigned long long>(bias) << (k + 6);
        if (lhs > static_cast<unsigned long long>(board.vertex_count))
            throw std::invalid_argument("tree-dense: bias exceeds n / 2^{k+6}");
    }
    // level-1 copies: every vertex of W_1
    copies_.resize(plan_.level_n[0]);
    std::iota(copies_.begin(), copies_.end(), 0u);
    if (k == 1) {
        built_ = board.vertex_count;
        scripted_done_ = true;
    } else {
        start_level(2);
    }
}

void TreeDenseWaiter::start_level(std::uint32_t level)
{
    level_ = level;
    const std::uint32_t stride = level - 1;
    const std::uint32_t n_copies = static_cast<std::uint32_t>(copies_.size() / stride);
    const int v2_lo = plan_.level_n[level - 2];
    const int v2_hi = plan_.level_n[level - 1];
    rounds_per_group_ = static_cast<std::uint32_t>((v2_hi - v2_lo) / (bias_ + 1));

    if (n_copies == 0 || rounds_per_group_ == 0) {
        copies_.clear();
        next_copies_.clear();
        scripted_done_ = true;
        return;
    }

    const int anchor_slot = plan_.label_slot[plan_.anchor_label[level - 2]];
    sorted_idx_.resize(n_copies);
    std::iota(sorted_idx_.begin(), sorted_idx_.end(), 0u);
    auto anchor_of = [&](std::uint32_t idx) {
        return copies_[static_cast<size_t>(idx) * stride + anchor_slot];
    };
    std::stable_sort(sorted_idx_.begin(), sorted_idx_.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return anchor_of(a) < anchor_of(b); });
    groups_.clear();
    group_anchor_.clear();
    std::uint32_t start = 0;
    for (std::uint32_t i = 1; i <= n_copies; ++i) {
        if (i == n_copies || anchor_of(sorted_idx_[i]) != anchor_of(sorted_idx_[start])) {
            groups_.push_back({start, i});
            group_anchor_.push_back(anchor_of(sorted_idx_[start]));
            start = i;
        }
    }
    group_idx_ = 0;
    rounds_left_ = rounds_per_group_;
    scan_v_ = v2_lo;
    next_copies_.clear();
}

void TreeDenseWaiter::finish_level()
{
    if (level_ == static_cast<std::uint32_t>(plan_.k)) {
        scripted_done_ = true;
        copies_.clear();
        return;
    }
    copies_ = std::move(next_copies_);
    next_copies_.clear();
    start_level(level_ + 1);
}

void TreeDenseWaiter::sync(const GameState& s)
{
    for (; seen_rounds_ < s.transcript.rounds(); ++seen_rounds_) {
        if (pending_rounds_ == 0)
            continue; // not one of our scripted rounds
        --pending_rounds_;
        Element pick = s.transcript.picks[seen_rounds_];
        auto [u, v] = board_->endpoints(pick);
        const std::uint32_t anchor = group_anchor_[group_idx_];
        const std::uint32_t w = static_cast<std::uint32_t>(u) == anchor
            ? static_cast<std::uint32_t>(v)
            : static_cast<std::uint32_t>(u);
        auto [g_lo, g_hi] = groups_[group_idx_];
        const std::uint32_t stride = level_ - 1;
        if (level_ == static_cast<std::uint32_t>(plan_.k)) {
            built_ += g_hi - g_lo;
        } else {
            if (next_copies_.size() + static_cast<size_t>(g_hi - g_lo) * (stride + 1)
                > copy_cap_entries_)
                throw std::runtime_error("tree-dense: copy bookkeeping cap exceeded");
            for (std::uint32_t gi = g_lo; gi < g_hi; ++gi) {
                const std::uint32_t idx = sorted_idx_[gi];
                for (std::uint32_t t = 0; t < stride; ++t)
                    next_copies_.push_back(copies_[static_cast<size_t>(idx) * stride + t]);
                next_copies_.push_back(w);
            }
        }
        if (--rounds_left_ == 0) {
            if (++group_idx_ == groups_.size())
                finish_level();
            else {
                rounds_left_ = rounds_per_group_;
                scan_v_ = plan_.level_n[level_ - 2];
            }
        }
    }
}

std::vector<Element> TreeDenseWaiter::offer(const GameState& s)
{
    sync(s);
    if (scripted_done_)
        return padding_offer(s, &pad_cursor_, bias_);
    const std::uint32_t anchor = group_anchor_[group_idx_];
    std::vector<Element> out;
    out.reserve(bias_ + 1);
    const int v2_hi = plan_.level_n[level_ - 1];
    while (out.size() < static_cast<size_t>(bias_) + 1) {
        if (scan_v_ >= v2_hi)
            throw std::logic_error("tree-dense: exhausted V2 for the current anchor");
        Element e = board_->element_id(static_cast<int>(anchor), scan_v_);
        ++scan_v_;
        if (e != kNoElement && s.owner[e] == Owner::free_)
            out.push_back(e);
    }
    ++pending_rounds_;
    return out;
}

std::unique_ptr<WaiterStrategy> TreeDenseWaiter::clone() const
{
    return std::make_unique<TreeDenseWaiter>(*this);
}

// ---------------------------------------------------------------- tree sparse

TreeSparseWaiter::TreeSparseWaiter(const Board& board, int bias, const Pattern& tree, bool relax)
    : board_(&board)
    , bias_(bias)
    , plan_(tree, board.vertex_count)
{
    if (board.kind != Board::Kind::complete)
        throw std::invalid_argument("tree-sparse: needs a complete board");
    const int k = plan_.k;
    const int n = board.vertex_count;
    if (!relax && k >= 2) {
        double upper = std::pow(n, static_cast<double>(k) / (k - 1)) / std::pow(2.0, k + 6);
        if (bias < n || bias > upper)
            throw std::invalid_argument(
                "tree-sparse: bias outside [n, n^{k/(k-1)} / 2^{k+6}]");
    }
    copies_.resize(plan_.level_n[0]);
    std::iota(copies_.begin(), copies_.end(), 0u);
    anchor_to_copy_.assign(board.vertex_count, -1);
    if (k == 1)
        scripted_done_ = true;
    else
        start_level(2);
}

void TreeSparseWaiter::start_level(std::uint32_t level)
{
    level_ = level;
    const std::uint32_t stride = level - 1;
    const std::uint32_t n_copies = static_cast<std::uint32_t>(copies_.size() / stride);
    const int anchor_slot = plan_.label_slot[plan_.anchor_label[level - 2]];
    std::fill(anchor_to_copy_.begin(), anchor_to_copy_.end(), -1);
    extended_.assign(n_copies, false);
    for (std::uint32_t c = 0; c < n_copies; ++c)
        anchor_to_copy_[copies_[static_cast<size_t>(c) * stride + anchor_slot]] =
            static_cast<int>(c);
    const int v2_lo = plan_.level_n[level - 2];
    const int v2_hi = plan_.level_n[level - 1];
    b_removed_.assign(v2_hi - v2_lo, false);
    picks_this_level_ = 0;
    // the early stop only applies when the target is at least one copy;
    // below that the threshold is vacuous and the stage runs on free edges
    auto t = tree_guarantee(level, v2_hi, bias_);
    level_target_ = (t && t->num >= t->den) ? t : std::nullopt;
    next_copies_.clear();
}

void TreeSparseWaiter::finish_level()
{
    copies_ = std::move(next_copies_);
    next_copies_.clear();
    if (level_ == static_cast<std::uint32_t>(plan_.k)) {
        scripted_done_ = true;
        return;
    }
    start_level(level_ + 1);
}

void TreeSparseWaiter::sync(const GameState& s)
{
    for (; seen_rounds_ < s.transcript.rounds(); ++seen_rounds_) {
        if (pending_rounds_ == 0)
            continue;
        --pending_rounds_;
        Element pick = s.transcript.picks[seen_rounds_];
        auto [u, v] = board_->endpoints(pick);
        const int v2_lo = plan_.level_n[level_ - 2];
        int a = u, w = v;
        if (a >= v2_lo)
            std::swap(a, w);
        const int copy = anchor_to_copy_[a];
        const std::uint32_t stride = level_ - 1;
        extended_[copy] = true;
        b_removed_[w - v2_lo] = true;
        ++picks_this_level_;
        for (std::uint32_t t = 0; t < stride; ++t)
            next_copies_.push_back(copies_[static_cast<size_t>(copy) * stride + t]);
        next_copies_.push_back(static_cast<std::uint32_t>(w));
    }
}

std::vector<Element> TreeSparseWaiter::offer(const GameState& s)
{
    sync(s);
    while (!scripted_done_) {
        if (level_target_ && count_at_least(picks_this_level_, *level_target_)) {
            finish_level();
            continue;
        }
        // assemble b+1 free E(A, B) edges; if impossible, the level is over
        const std::uint32_t stride = level_ - 1;
        const std::uint32_t n_copies = static_cast<std::uint32_t>(copies_.size() / stride);
        const int anchor_slot = plan_.label_slot[plan_.anchor_label[level_ - 2]];
        const int v2_lo = plan_.level_n[level_ - 2];
        const int v2_hi = plan_.level_n[level_ - 1];
        std::vector<Element> out;
        out.reserve(bias_ + 1);
        for (std::uint32_t c = 0; c < n_copies && out.size() < static_cast<size_t>(bias_) + 1;
             ++c) {
            if (extended_[c])
                continue;
            int a = copies_[static_cast<size_t>(c) * stride + anchor_slot];
            for (int w = v2_lo; w < v2_hi && out.size() < static_cast<size_t>(bias_) + 1; ++w) {
                if (b_removed_[w - v2_lo])
                    continue;
                Element e = board_->element_id(a, w);
                if (e != kNoElement && s.owner[e] == Owner::free_)
                    out.push_back(e);
            }
        }
        if (out.size() == static_cast<size_t>(bias_) + 1) {
            ++pending_rounds_;
            return out;
        }
        finish_level();
    }
    return padding_offer(s, &pad_cursor_, bias_);
}

std::vector<std::vector<std::uint32_t>> TreeSparseWaiter::final_copies() const
{
    std::vector<std::vector<std::uint32_t>> out;
    if (!scripted_done_ || plan_.k == 0)
        return out;
    const std::uint32_t stride = plan_.k;
    for (size_t c = 0; c + stride <= copies_.size(); c += stride) {
        std::vector<std::uint32_t> tuple(plan_.k);
        for (int label = 0; label < plan_.k; ++label)
            tuple[label] = copies_[c + plan_.label_slot[label]];
        out.push_back(std::move(tuple));
    }
    return out;
}

std::unique_ptr<WaiterStrategy> TreeSparseWaiter::clone() const
{
    return std::make_unique<TreeSparseWaiter>(*this);
}

// ---------------------------------------------------------------- triangle

TriangleWaiter::TriangleWaiter(const Board& board, int bias, bool relax)
    : board_(&board)
    , bias_(bias)
{
    if (board.kind != Board::Kind::blowup || board.parts() != 3 || !board.base.is_complete())
        throw std::invalid_argument("triangle waiter: needs a K_3 blow-up board");
    s_ = board.part_size;
    if (!relax && bias + 1 > s_)
        throw std::invalid_argument("triangle waiter: bias too large for the part size");
    rounds_left_ = s_ / (bias_ + 1);
    scan_ = s_; // V2 starts at s
    client_adj_ = VertexAdjacency(board, EdgeSet(board.element_count));
}

void TriangleWaiter::sync(const GameState& s)
{
    for (; seen_rounds_ < s.transcript.rounds(); ++seen_rounds_) {
        Element pick = s.transcript.picks[seen_rounds_];
        auto [u, v] = board_->endpoints(pick);
        client_adj_.add_edge(u, v);
    }
}

std::vector<Element> TriangleWaiter::offer(const GameState& s)
{
    sync(s);
    const int per_vertex = s_ / (bias_ + 1);

    while (stage_ <= 2) {
        if (per_vertex == 0) {
            stage_ = 3;
            break;
        }
        if (vertex_idx_ >= s_) {
            ++stage_;
            vertex_idx_ = 0;
            rounds_left_ = per_vertex;
            scan_ = stage_ == 2 ? 2 * s_ : 0;
            continue;
        }
        int x = stage_ == 1 ? vertex_idx_ : s_ + vertex_idx_;
        std::vector<Element> out;
        out.reserve(bias_ + 1);
        while (out.size() < static_cast<size_t>(bias_) + 1) {
            Element e = board_->element_id(x, scan_);
            ++scan_;
            if (e != kNoElement && s.owner[e] == Owner::free_)
                out.push_back(e);
        }
        if (--rounds_left_ == 0) {
            ++vertex_idx_;
            rounds_left_ = per_vertex;
            scan_ = stage_ == 1 ? s_ : 2 * s_;
        }
        return out;
    }

    if (stage_ == 3 && stage3_order_.empty()) {
        // order E(V1, V3) by t descending, id ascending
        std::vector<std::pair<int, Element>> ranked;
        ranked.reserve(static_cast<size_t>(s_) * s_);
        const int words = client_adj_.words;
        std::vector<std::uint64_t> v2_mask(words, 0);
        for (int y = s_; y < 2 * s_; ++y)
            v2_mask[y >> 6] |= 1ULL << (y & 63);
        for (int x = 0; x < s_; ++x)
            for (int z = 2 * s_; z < 3 * s_; ++z) {
                int t = 0;
                for (int w = 0; w < words; ++w)
                    t += std::popcount(client_adj_.row(x)[w] & client_adj_.row(z)[w]
                                       & v2_mask[w]);
                ranked.push_back({t, board_->element_id(x, z)});
            }
        std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
            return a.first != b.first ? a.first > b.first : a.second < b.second;
        });
        stage3_order_.reserve(ranked.size());
        for (auto& [t, e] : ranked)
            stage3_order_.push_back(e);
        stage3_pos_ = 0;
        stage3_rounds_left_ = (static_cast<size_t>(s_) * s_) / (bias_ + 1);
    }

    if (stage_ == 3 && stage3_rounds_left_ > 0) {
        std::vector<Element> out(stage3_order_.begin() + stage3_pos_,
                                 stage3_order_.begin() + stage3_pos_ + bias_ + 1);
        stage3_pos_ += bias_ + 1;
        --stage3_rounds_left_;
        if (stage3_rounds_left_ == 0)
            stage_ = 4;
        return out;
    }

    stage_ = 4;
    return padding_offer(s, &pad_cursor_, bias_);
}

std::unique_ptr<WaiterStrategy> TriangleWaiter::clone() const
{
    return std::make_unique<TriangleWaiter>(*this);
}

// ---------------------------------------------------------------- clique

CliqueWaiter::CliqueWaiter(const Board& board, int bias, int k, int i, const std::string& stage1,
                           std::uint64_t seed, double alpha,
                           std::vector<std::vector<Element>> stage1_bad_family)
    : board_(&board)
    , bias_(bias)
    , k_(k)
    , i_(i)
    , stage1_name_(stage1)
    , alpha_(alpha)
    , allowed_(board.element_count)
{
    if (board.kind != Board::Kind::blowup || board.parts() != k || !board.base.is_complete())
        throw std::invalid_argument("clique waiter: needs a K_k blow-up board");
    h_i_ = clique_minus_matching(k, i);
    removed_ = clique_matching_edges(k, i);

    const std::uint64_t s2 =
        static_cast<std::uint64_t>(board.part_size) * board.part_size;
    std::vector<bool> blocked(board.base.edge_count(), false);
    for (auto [a, b] : removed_)
        blocked[board.block_of_parts(a, b)] = true;
    for (Element e = 0; e < board.element_count; ++e)
        if (!blocked[e / s2])
            allowed_.set(e);

    stage1_budget_ = round_budget(h_i_, board.part_size, bias, alpha);
    if (stage1 == "random") {
        stage1_policy_ = std::make_unique<RandomWaiter>(board, bias, seed, &allowed_);
    } else if (stage1 == "min-degree") {
        stage1_policy_ = std::make_unique<MinDegreeWaiter>(board, bias,
                                                           std::move(stage1_bad_family),
                                                           &allowed_);
    } else if (stage1 == "copy-completion") {
        stage1_policy_ = std::make_unique<CopyCompletionWaiter>(board, bias, h_i_, allowed_);
    } else {
        throw std::invalid_argument("clique waiter: unknown stage-1 policy '" + stage1 + "'");
    }
}

CliqueWaiter::CliqueWaiter(const CliqueWaiter& other)
    : WaiterStrategy(other)
    , board_(other.board_)
    , bias_(other.bias_)
    , k_(other.k_)
    , i_(other.i_)
    , stage1_name_(other.stage1_name_)
    , alpha_(other.alpha_)
    , h_i_(other.h_i_)
    , removed_(other.removed_)
    , allowed_(other.allowed_)
    , stage1_budget_(other.stage1_budget_)
    , stage1_offers_(other.stage1_offers_)
    , stage1_policy_(other.stage1_policy_ ? other.stage1_policy_->clone() : nullptr)
    , family_ready_(other.family_ready_)
    , family_(other.family_)
    , sparse_family_size_(other.sparse_family_size_)
    , phase_(other.phase_)
    , phase_rounds_left_(other.phase_rounds_left_)
    , copy_cursor_(other.copy_cursor_)
    , survivors_(other.survivors_)
    , pending_maps_(other.pending_maps_)
    , anomalies_(other.anomalies_)
    , scripted_done_(other.scripted_done_)
    , pad_cursor_(other.pad_cursor_)
    , seen_rounds_(other.seen_rounds_)
{
}

std::string CliqueWaiter::name() const
{
    return "clique:" + std::to_string(k_) + "," + std::to_string(i_) + ":" + stage1_name_;
}

void CliqueWaiter::sync(const GameState& s)
{
    for (; seen_rounds_ < s.transcript.rounds(); ++seen_rounds_) {
        if (pending_maps_.empty())
            continue; // stage-1 or padding round
        auto map = std::move(pending_maps_.front());
        pending_maps_.erase(pending_maps_.begin());
        Element pick = s.transcript.picks[seen_rounds_];
        for (auto& [e, idx] : map)
            if (e == pick) {
                survivors_.push_back(family_[idx]);
                break;
            }
    }
}

void CliqueWaiter::extract_family(const GameState& s)
{
    // the client's stage-1 edges live on the H_i sub-board
    Board hi_board = Board::blowup(h_i_, board_->part_size);
    EdgeSet claimed(hi_board.element_count);
    for (Element e = 0; e < board_->element_count; ++e) {
        if (s.owner[e] != Owner::client)
            continue;
        auto [u, v] = board_->endpoints(e);
        Element he = hi_board.element_id(u, v);
        if (he != kNoElement)
            claimed.set(he);
    }
    auto copies = canonical_copies_list(hi_board, claimed);
    family_ = greedy_disjointify(h_i_, copies);
    sparse_family_size_ = family_.size();
    family_ready_ = true;
    phase_ = 1;
    start_phase(s);
}

void CliqueWaiter::start_phase(const GameState&)
{
    phase_rounds_left_ = static_cast<std::uint32_t>(family_.size() / (bias_ + 1));
    copy_cursor_ = 0;
    survivors_.clear();
    if (phase_rounds_left_ == 0 && phase_ <= i_) {
        // cannot run a single round; the phase ends with an empty family
        family_.clear();
        scripted_done_ = true;
    }
}

std::vector<Element> CliqueWaiter::offer(const GameState& s)
{
    sync(s);

    if (!family_ready_ && stage1_offers_ < stage1_budget_) {
        ++stage1_offers_;
        return stage1_policy_->offer(s);
    }
    if (!family_ready_)
        extract_family(s);

    while (!scripted_done_ && phase_ <= i_) {
        if (phase_rounds_left_ == 0) {
            family_ = std::move(survivors_);
            survivors_.clear();
            ++phase_;
            if (phase_ > i_) {
                scripted_done_ = true;
                break;
            }
            start_phase(s);
            continue;
        }
        auto [uj, vj] = removed_[phase_ - 1];
        std::vector<Element> out;
        std::vector<std::pair<Element, std::uint32_t>> map;
        while (out.size() < static_cast<size_t>(bias_) + 1 && copy_cursor_ < family_.size()) {
            const auto& copy = family_[copy_cursor_];
            Element e = board_->element_id(static_cast<int>(copy[uj]), static_cast<int>(copy[vj]));
            if (e == kNoElement || s.owner[e] != Owner::free_) {
                ++anomalies_;
                ++copy_cursor_;
                continue;
            }
            out.push_back(e);
            map.push_back({e, copy_cursor_});
            ++copy_cursor_;
        }
        if (out.size() < static_cast<size_t>(bias_) + 1) {
            // could not assemble a full offer: the phase ends here
            ++anomalies_;
            phase_rounds_left_ = 0;
            continue;
        }
        --phase_rounds_left_;
        pending_maps_.push_back(std::move(map));
        return out;
    }

    scripted_done_ = true;
    return padding_offer(s, &pad_cursor_, bias_);
}

std::unique_ptr<WaiterStrategy> CliqueWaiter::clone() const
{
    return std::make_unique<CliqueWaiter>(*this);
}

// ---------------------------------------------------------------- completion

CopyCompletionWaiter::CopyCompletionWaiter(const Board& board, int bias, Pattern target,
                                           EdgeSet allowed)
    : board_(&board)
    , bias_(bias)
    , target_(std::move(target))
    , allowed_(std::move(allowed))
    , client_adj_(board, EdgeSet(board.element_count))
{
}

void CopyCompletionWaiter::sync(const GameState& s)
{
    for (; seen_rounds_ < s.transcript.rounds(); ++seen_rounds_) {
        Element pick = s.transcript.picks[seen_rounds_];
        auto [u, v] = board_->endpoints(pick);
        client_adj_.add_edge(u, v);
    }
}

std::vector<Element> CopyCompletionWaiter::offer(const GameState& s)
{
    sync(s);
    // canonical copies of the target that e would complete against Client's
    // current graph
    auto completions = [&](Element e) {
        auto [u, v] = board_->endpoints(e);
        int pu = board_->part_of(u), pv = board_->part_of(v);
        std::uint64_t c = 0;
        PinnedEnum en;
        en.g = &client_adj_;
        en.h = &target_;
        en.canon = board_;
        for (auto [a, b] : target_.edges) {
            if (a == pu && b == pv)
                en.run(a, b, u, v, [&](const std::vector<int>&) { ++c; });
            else if (a == pv && b == pu)
                en.run(a, b, v, u, [&](const std::vector<int>&) { ++c; });
        }
        return c;
    };
    std::vector<std::pair<std::uint64_t, Element>> ranked;
    for (Element e = 0; e < board_->element_count; ++e) {
        if (!allowed_.test(e) || s.owner[e] != Owner::free_)
            continue;
        ranked.push_back({completions(e), e});
    }
    if (ranked.size() < static_cast<size_t>(bias_) + 1)
        throw std::logic_error("copy-completion waiter: not enough free elements");
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    std::vector<Element> out;
    for (size_t i = 0; i <= static_cast<size_t>(bias_); ++i)
        out.push_back(ranked[i].second);
    return out;
}

std::unique_ptr<WaiterStrategy> CopyCompletionWaiter::clone() const
{
    return std::make_unique<CopyCompletionWaiter>(*this);
}

} // namespace posgame
