// Copyright 2026 The atomnoise Authors
// SPDX-License-Identifier: Apache-2.0

//! Figure-reproduction scenarios shipped with the binary.

pub const NAMES: [&str; 4] = ["fig2", "fig3", "fig4", "fig5"];

/// Scenario text of a preset.
pub fn text(name: &str) -> Option<&'static str> {
    match name {
        "fig2" => Some(include_str!("../presets/fig2.toml")),
        "fig3" => Some(include_str!("../presets/fig3.toml")),
        "fig4" => Some(include_str!("../presets/fig4.toml")),
        "fig5" => Some(include_str!("../presets/fig5.toml")),
        _ => None,
    }
}
