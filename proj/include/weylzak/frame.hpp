#pragma once

#include <optional>
#include <string>
#include <vector>

#include "weylzak/bracket.hpp"

namespace wz {

enum class Verdict { frame_sequence, riesz_sequence, orthonormal_system, not_frame, inconclusive };

std::string verdict_name(Verdict v);

struct ThresholdProbe {
    double tau_rel = 0;
    double tau_abs = 0;
    double A = 0;
    double B = 0;
    double support_fraction = 0;
    Verdict verdict = Verdict::inconclusive;
};

struct FrameReport {
    double A = 0;
    double B = 0;
    double support_fraction = 0;
    double tau_rel = 0;
    double tau_abs = 0;
    Verdict verdict = Verdict::inconclusive;
    bool stable = false;
    std::vector<ThresholdProbe> sensitivity;
    // Relative movement of the bounds against the 2x coarser subsample.
    double refinement_A = 0;
    double refinement_B = 0;
    bool refinement_ok = true;
    bool global = false;
};

struct FrameOptions {
    double tau_rel = 1e-8;
    double ortho_tol = 1e-3;
    double refinement_tol = 0.01;
};

FrameReport frame_bounds(const BracketTable& B, const FrameOptions& options = {});
FrameReport riesz_bounds(const BracketTable& B, const FrameOptions& options = {});
bool orthonormality_check(const BracketTable& B, double tol);

struct DualReport {
    bool exists = false;
    std::vector<double> thresholds;
    std::vector<double> integrals;
    double growth = 0;
};

DualReport dual_existence(const BracketTable& B, double tau_rel = 1e-8);
ZakField dualize(const ZakField& Z, const BracketTable& B, double tau_rel = 1e-8);
ZakField orthonormalize(const ZakField& Z, const BracketTable& B, double tau_rel = 1e-8);

struct Membership {
    BracketTable r;
    double residual = 0;
    double weighted_norm = 0;
    bool member = false;
};

Membership membership_multiplier(const ZakField& Zf, const ZakField& Zphi, const BracketTable& Bphi,
                                 double tol, double tau_rel = 1e-8);

struct A2Report {
    double C = 0;
    int depth = 0;
    std::vector<double> level_trace;
    std::vector<double> floors;
    std::vector<double> floor_trace;
    std::size_t nonpositive_nodes = 0;
    bool flat = false;
    bool diverging = false;
    bool schauder = false;
};

struct A2Options {
    int depth = 6;
    double floor_rel = 1e-8;
    double flat_tol = 0.05;
};

A2Report a2_constant(const BracketTable& B, const A2Options& options = {});

}  // namespace wz
