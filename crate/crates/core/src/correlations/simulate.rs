use super::matrix::{layercake_decompose, CorrelationMatrix};
use crate::protocol::{ParallelXorProtocol, ProtocolMixture};
use crate::rational::Prob;

/// A mixture of strict rank protocols reproducing `C` exactly. Each
/// layer-cake component is rank-synthesized, then split in two halves of
/// which one flips both outputs; the flip keeps every parity and makes both
/// marginals exactly uniform even for components with no boxes. Components
/// are padded to a common box count with all-zero boxes.
pub fn simulate_distribution(c: &CorrelationMatrix) -> ProtocolMixture<ParallelXorProtocol> {
    let (rows, cols) = (c.rows(), c.cols());
    let layers = layercake_decompose(c);
    let mut protos: Vec<(Prob, ParallelXorProtocol)> = layers
        .components
        .iter()
        .map(|(w, m)| {
            let f = m.factorize();
            (
                *w,
                ParallelXorProtocol::strict(rows, cols, f.row_factors, f.col_factors),
            )
        })
        .collect();
    let t = protos.iter().map(|(_, p)| p.boxes()).max().unwrap_or(0);
    let mut components = Vec::with_capacity(2 * protos.len());
    let half = Prob::new(1, 2);
    for (w, mut p) in protos.drain(..) {
        p.p.resize(t, vec![false; rows]);
        p.q.resize(t, vec![false; cols]);
        let mut flipped = p.clone();
        flipped.local_a = vec![true; rows];
        flipped.local_b = vec![true; cols];
        components.push((w * half, p));
        components.push((w * half, flipped));
    }
    ProtocolMixture::new(components)
}
