//! Shared fixtures for the criterion benchmarks.

use fapk_core::availability::{SiteGaps, SiteState};
use fapk_core::bench::{generate_instance, Group, ScenarioParams};
use fapk_core::model::{Frequency, Instance, Spectrum};

pub fn group_instance(group: Group, seed: u64) -> Instance {
    generate_instance(&ScenarioParams::group(group, seed)).expect("group parameters are feasible")
}

/// A half-loaded site: two transmitters and three receivers in place.
pub fn busy_site(rr: u32) -> SiteState {
    let s = Spectrum::rita();
    let idx = |f: u32| s.index_of(Frequency(f)).unwrap();
    let mut st = SiteState::empty(0, SiteGaps::with_rx_rx(rr));
    for f in [40000, 41140] {
        st.tx.insert(idx(f));
    }
    for f in [44000, 44140, 45210] {
        st.rx.insert(idx(f));
    }
    st.unassigned_tx = 3;
    st.unassigned_rx = 2;
    st.open_links = 2;
    st
}
