use std::time::Duration;

use serde::Serialize;

/// Operation counts and wall-clock time of one MatMul evaluation.
///
/// `other_ms` is the remainder of the total after the three operator
/// classes, which covers plaintext encoding and bookkeeping.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct MatMulStats {
    pub rot_count: u64,
    pub pcmul_count: u64,
    pub ccadd_count: u64,
    pub pcmul_ms: f64,
    pub rot_ms: f64,
    pub ccadd_ms: f64,
    pub other_ms: f64,
    pub total_ms: f64,
    /// Shift of every rotation in call order.
    pub rotation_shifts: Vec<usize>,
}

/// Percentage split of the total time over the operator classes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct TimeBreakdown {
    pub pcmul_pct: f64,
    pub rot_pct: f64,
    pub ccadd_pct: f64,
    pub other_pct: f64,
}

pub(crate) fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

impl MatMulStats {
    pub(crate) fn finish(&mut self, total: Duration) {
        self.total_ms = ms(total);
        self.other_ms = (self.total_ms - self.pcmul_ms - self.rot_ms - self.ccadd_ms).max(0.0);
    }

    pub fn breakdown(&self) -> TimeBreakdown {
        if self.total_ms <= 0.0 {
            return TimeBreakdown::default();
        }
        let pct = |x: f64| 100.0 * x / self.total_ms;
        TimeBreakdown {
            pcmul_pct: pct(self.pcmul_ms),
            rot_pct: pct(self.rot_ms),
            ccadd_pct: pct(self.ccadd_ms),
            other_pct: pct(self.other_ms),
        }
    }

    /// Mean latency of one rotation and one plaintext product.
    pub fn per_op_ms(&self) -> (Option<f64>, Option<f64>) {
        let mean = |t: f64, c: u64| (c > 0).then(|| t / c as f64);
        (mean(self.rot_ms, self.rot_count), mean(self.pcmul_ms, self.pcmul_count))
    }

    /// Adds the counts and times of another run.
    pub fn accumulate(&mut self, other: &MatMulStats) {
        self.rot_count += other.rot_count;
        self.pcmul_count += other.pcmul_count;
        self.ccadd_count += other.ccadd_count;
        self.pcmul_ms += other.pcmul_ms;
        self.rot_ms += other.rot_ms;
        self.ccadd_ms += other.ccadd_ms;
        self.other_ms += other.other_ms;
        self.total_ms += other.total_ms;
        self.rotation_shifts.extend_from_slice(&other.rotation_shifts);
    }

    /// Zeroes every timing field, leaving only deterministic content.
    pub fn clear_timings(&mut self) {
        self.pcmul_ms = 0.0;
        self.rot_ms = 0.0;
        self.ccadd_ms = 0.0;
        self.other_ms = 0.0;
        self.total_ms = 0.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn breakdown_sums_to_hundred() {
        let mut s = MatMulStats {
            pcmul_ms: 50.0,
            rot_ms: 30.0,
            ccadd_ms: 5.0,
            ..Default::default()
        };
        s.finish(Duration::from_millis(100));
        let b = s.breakdown();
        assert!((b.pcmul_pct + b.rot_pct + b.ccadd_pct + b.other_pct - 100.0).abs() < 1e-9);
        assert!((b.other_pct - 15.0).abs() < 1e-9);
    }

    #[test]
    fn per_op_handles_zero_counts() {
        let s = MatMulStats::default();
        assert_eq!(s.per_op_ms(), (None, None));
    }
}
