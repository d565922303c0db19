//! `wasm-bindgen` exports for the static page in `www/`. Each function
//! wraps one pure operation from the crate root and hands the browser a
//! JSON string; errors surface as rejected promises with the library's
//! own message text.

use wasm_bindgen::prelude::*;

fn err_js(e: parray_core::Error) -> JsValue {
    JsValue::from_str(&e.to_string())
}

/// Closed-form pair gain for the live sliders.
#[wasm_bindgen]
pub fn gain_curve_json(spacing_wl: f64, parasitic_len_wl: f64) -> Result<String, JsValue> {
    crate::two_element_gain_curve(spacing_wl, parasitic_len_wl)
        .map(|c| c.to_json())
        .map_err(err_js)
}

/// Baseline-array pattern cuts; `free_space` ignores the soil sliders.
#[wasm_bindgen]
pub fn array_study_json(
    elements: u32,
    free_space: bool,
    epsilon_r: f64,
    sigma_s_per_m: f64,
) -> Result<String, JsValue> {
    let ground = if free_space { None } else { Some((epsilon_r, sigma_s_per_m)) };
    crate::array_study(elements, ground).map(|s| s.to_json()).map_err(err_js)
}

/// Small-budget soil-aware redesign of the three-element array.
#[wasm_bindgen]
pub fn quick_redesign_json(
    epsilon_r: f64,
    sigma_s_per_m: f64,
    seed: u32,
    generations: u32,
) -> Result<String, JsValue> {
    crate::quick_redesign(epsilon_r, sigma_s_per_m, seed, generations)
        .map(|r| r.to_json())
        .map_err(err_js)
}
