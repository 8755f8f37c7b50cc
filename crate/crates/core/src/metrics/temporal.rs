use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{density_of, MetricsError, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TimeSlice {
    pub index: usize,
    /// Inclusive start, epoch seconds.
    pub start_time: i64,
    /// Exclusive end, epoch seconds.
    pub end_time: i64,
    pub link_ids: BTreeSet<String>,
    pub density: f64,
}

/// Splits [min time, max time + 1) into `bins` equal-width half-open slices.
/// Boundaries are floored to whole seconds.
pub fn temporal_slices(g: &Graph, bins: usize) -> Result<Vec<TimeSlice>> {
    if !g.capabilities().temporal {
        return Err(MetricsError::NotTemporal);
    }
    if bins == 0 {
        return Err(MetricsError::InvalidArgument("bin count must be at least 1".into()));
    }
    let times: Vec<i64> = g.links().iter().map(|l| l.time.expect("temporal graph")).collect();
    let min = *times.iter().min().expect("temporal graph has links");
    let max = *times.iter().max().expect("temporal graph has links");
    let span = (max as i128) + 1 - (min as i128);
    let bound = |i: usize| (min as i128 + (i as i128 * span) / bins as i128) as i64;
    let bounds: Vec<i64> = (0..=bins).map(bound).collect();

    let mut members: Vec<Vec<usize>> = vec![Vec::new(); bins];
    for (l, &t) in times.iter().enumerate() {
        // last slice whose start is <= t
        let slice = bounds[1..].partition_point(|&end| end <= t);
        members[slice].push(l);
    }

    members
        .into_iter()
        .enumerate()
        .map(|(index, links)| {
            let nodes: BTreeSet<usize> = links
                .iter()
                .flat_map(|&l| {
                    let (s, t) = g.endpoints()[l];
                    [s, t]
                })
                .collect();
            let density = match density_of(g, nodes.len(), &links) {
                Ok(d) => d,
                Err(MetricsError::DegenerateGraph) => 0.0,
                Err(e) => return Err(e),
            };
            Ok(TimeSlice {
                index,
                start_time: bounds[index],
                end_time: bounds[index + 1],
                link_ids: links.iter().map(|&l| g.links()[l].id.clone()).collect(),
                density,
            })
        })
        .collect()
}
