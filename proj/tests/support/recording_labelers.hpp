// Oracle labeler decorators that log every query, for trace checks.
#pragma once

#include <cstdint>
#include <vector>

#include "duolab/labelers.hpp"

namespace duolab::testing {

struct RecordedQuery {
    char kind;  // 'S' or 'W'
    std::int64_t sample_id;
    int candidate;  // weak only, -1 for strong
    int answer;     // strong: the label; weak: 0/1
};

class RecordingStrong final : public StrongLabeler {
public:
    explicit RecordingStrong(std::vector<RecordedQuery>& log) : log_(log) {}
    int label_of(const Sample& s) override {
        int label = base_.label_of(s);
        log_.push_back({'S', s.id(), -1, label});
        return label;
    }

private:
    OracleStrongLabeler base_;
    std::vector<RecordedQuery>& log_;
};

class RecordingWeak final : public WeakLabeler {
public:
    explicit RecordingWeak(std::vector<RecordedQuery>& log) : log_(log) {}
    bool confirms(const Sample& s, int candidate) override {
        bool answer = base_.confirms(s, candidate);
        log_.push_back({'W', s.id(), candidate, answer ? 1 : 0});
        return answer;
    }

private:
    OracleWeakLabeler base_;
    std::vector<RecordedQuery>& log_;
};

}  // namespace duolab::testing
