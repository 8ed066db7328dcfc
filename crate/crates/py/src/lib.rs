//! Python bindings: groups, measures and the dc/cr engines, driven by
//! element words. Reports come back as JSON strings.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use degcom::group::words;
use degcom::report;
use degcom::{
    conj, dc_of_measure, finite, mass_of_small_centralizers, schreier_cosets, Caps, Element,
    Error, Measure, MeasureSeqSpec, MixingParams, SubgroupIndex, SubgroupOracle,
};

fn pyerr(e: Error) -> PyErr {
    match e {
        Error::Resource(r) => PyRuntimeError::new_err(r.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn caps() -> Caps {
    Caps::default()
}

/// A group with a fixed generating set; elements are addressed by
/// words like "t^-1 s" or, for finite tables, element names.
#[pyclass(name = "Group")]
struct PyGroup {
    spec: degcom::GroupSpec,
}

impl PyGroup {
    fn parse(&self, w: &str) -> PyResult<Element> {
        words::parse_element(&self.spec, w).map_err(pyerr)
    }

    fn render(&self, x: &Element) -> String {
        words::render_element(&self.spec, x)
    }
}

#[pymethods]
impl PyGroup {
    /// Look up a built-in group: z, z^2, heisenberg, dinf, f2, zxf2,
    /// or a catalog table like q8, s3, d4, z12.
    #[new]
    fn new(name: &str) -> PyResult<Self> {
        Ok(PyGroup {
            spec: words::lookup_group(name).map_err(pyerr)?,
        })
    }

    /// Names of all built-in groups.
    #[staticmethod]
    fn known() -> Vec<String> {
        words::known_groups()
    }

    fn name(&self) -> String {
        self.spec.name().to_string()
    }

    fn is_abelian(&self) -> bool {
        self.spec.is_abelian()
    }

    fn order(&self) -> Option<u64> {
        self.spec.order()
    }

    fn identity(&self) -> String {
        self.render(&self.spec.identity())
    }

    fn generators(&self) -> Vec<String> {
        self.spec
            .default_genset()
            .elements()
            .iter()
            .map(|g| self.render(g))
            .collect()
    }

    fn mul(&self, a: &str, b: &str) -> PyResult<String> {
        let x = self.parse(a)?;
        let y = self.parse(b)?;
        Ok(self.render(&self.spec.multiply(&x, &y).map_err(pyerr)?))
    }

    fn inverse(&self, a: &str) -> PyResult<String> {
        let x = self.parse(a)?;
        Ok(self.render(&self.spec.inverse(&x).map_err(pyerr)?))
    }

    fn power(&self, a: &str, k: i64) -> PyResult<String> {
        let x = self.parse(a)?;
        Ok(self.render(&self.spec.power(&x, k).map_err(pyerr)?))
    }

    fn commute(&self, a: &str, b: &str) -> PyResult<bool> {
        let x = self.parse(a)?;
        let y = self.parse(b)?;
        self.spec.commute(&x, &y).map_err(pyerr)
    }

    /// g^-1 x g
    fn conjugate(&self, g: &str, x: &str) -> PyResult<String> {
        let gg = self.parse(g)?;
        let xx = self.parse(x)?;
        Ok(self.render(&self.spec.conjugate(&gg, &xx).map_err(pyerr)?))
    }

    fn ball_size(&self, n: u64) -> PyResult<u64> {
        Ok(degcom::ball(&self.spec, self.spec.default_genset(), n, caps().ball_atoms)
            .map_err(pyerr)?
            .len() as u64)
    }

    fn ball(&self, n: u64) -> PyResult<Vec<String>> {
        Ok(
            degcom::ball(&self.spec, self.spec.default_genset(), n, caps().ball_atoms)
                .map_err(pyerr)?
                .iter()
                .map(|x| self.render(x))
                .collect(),
        )
    }

    /// |S^{n+1}| / |S^n| as (exact, float).
    fn growth_ratio(&self, n: u64) -> PyResult<(String, f64)> {
        let r = degcom::growth_ratio(&self.spec, self.spec.default_genset(), n, caps().ball_atoms)
            .map_err(pyerr)?;
        let f = degcom::Scalar::Rational(r.clone()).to_f64();
        Ok((format!("{}/{}", r.numer(), r.denom()), f))
    }

    /// Canonical conjugacy-class label of an element.
    fn conj_class(&self, a: &str) -> PyResult<String> {
        let x = self.parse(a)?;
        let id = conj::conj_canonical(&self.spec, &x).map_err(pyerr)?;
        Ok(conj::class_label(&self.spec, &id))
    }

    /// Schreier index of a subgroup: (finite, value); value is the cap
    /// when the enumeration was truncated.
    fn schreier_index(&self, subgroup: &str) -> PyResult<(bool, u64)> {
        let h = SubgroupOracle::parse(&self.spec, subgroup, caps().coset).map_err(pyerr)?;
        let t = schreier_cosets(&self.spec, self.spec.default_genset(), &h, caps().coset)
            .map_err(pyerr)?;
        Ok(match t.index {
            SubgroupIndex::Finite(q) => (true, q as u64),
            SubgroupIndex::AtLeast(c) => (false, c as u64),
        })
    }

    fn __repr__(&self) -> String {
        format!("Group({:?})", self.spec.name())
    }
}

/// A finitely supported probability measure over a group.
#[pyclass(name = "Measure")]
struct PyMeasure {
    inner: Measure,
}

#[pymethods]
impl PyMeasure {
    /// Uniform measure on the radius-n ball.
    #[staticmethod]
    fn ball_uniform(group: &PyGroup, n: u64) -> PyResult<Self> {
        Ok(PyMeasure {
            inner: Measure::ball_uniform(
                &group.spec,
                group.spec.default_genset(),
                n,
                caps().ball_atoms,
            )
            .map_err(pyerr)?,
        })
    }

    /// Lazy symmetric step: 1/2 at e, 1/2 uniform on the generators.
    #[staticmethod]
    fn lazy_step(group: &PyGroup) -> PyResult<Self> {
        Ok(PyMeasure {
            inner: Measure::lazy_uniform_step(&group.spec, group.spec.default_genset())
                .map_err(pyerr)?,
        })
    }

    /// Point mass at an element word.
    #[staticmethod]
    fn dirac(group: &PyGroup, word: &str) -> PyResult<Self> {
        let x = group.parse(word)?;
        Ok(PyMeasure {
            inner: Measure::dirac(&group.spec, x).map_err(pyerr)?,
        })
    }

    /// Parse the line-oriented text format.
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(PyMeasure {
            inner: Measure::from_text(text).map_err(pyerr)?,
        })
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn support_size(&self) -> usize {
        self.inner.support_len()
    }

    fn mode(&self) -> String {
        self.inner.mode().to_string()
    }

    fn is_symmetric(&self) -> bool {
        self.inner.is_symmetric()
    }

    fn atom(&self, word: &str) -> PyResult<f64> {
        let spec = self.inner.spec().clone();
        let x = words::parse_element(&spec, word).map_err(pyerr)?;
        Ok(self.inner.atom(&x).to_f64())
    }

    fn atom_exact(&self, word: &str) -> PyResult<Option<String>> {
        let spec = self.inner.spec().clone();
        let x = words::parse_element(&spec, word).map_err(pyerr)?;
        Ok(self.inner.atom(&x).exact_string())
    }

    fn atoms(&self) -> Vec<(String, f64)> {
        let spec = self.inner.spec().clone();
        self.inner
            .atoms()
            .into_iter()
            .map(|(x, w)| (words::render_element(&spec, x), w.to_f64()))
            .collect()
    }

    fn convolve(&self, other: &PyMeasure) -> PyResult<Self> {
        Ok(PyMeasure {
            inner: self
                .inner
                .convolve(&other.inner, caps().support_atoms)
                .map_err(pyerr)?,
        })
    }

    fn walk_power(&self, n: u64) -> PyResult<Self> {
        Ok(PyMeasure {
            inner: self
                .inner
                .walk_power(n, caps().support_atoms)
                .map_err(pyerr)?,
        })
    }

    fn translate(&self, word: &str) -> PyResult<Self> {
        let spec = self.inner.spec().clone();
        let x = words::parse_element(&spec, word).map_err(pyerr)?;
        Ok(PyMeasure {
            inner: self.inner.translate(&x).map_err(pyerr)?,
        })
    }

    fn l1_distance(&self, other: &PyMeasure) -> PyResult<f64> {
        Ok(self.inner.l1_distance(&other.inner).map_err(pyerr)?.to_f64())
    }

    fn to_float(&self) -> Self {
        PyMeasure {
            inner: self.inner.to_float(),
        }
    }

    /// Probability that two independent draws commute.
    fn dc(&self) -> PyResult<f64> {
        Ok(dc_of_measure(&self.inner, caps().pairs).map_err(pyerr)?.to_f64())
    }

    fn dc_exact(&self) -> PyResult<Option<String>> {
        Ok(dc_of_measure(&self.inner, caps().pairs)
            .map_err(pyerr)?
            .exact_string())
    }

    /// mu(xH) for a subgroup description and a coset probe word.
    fn coset_mass(&self, subgroup: &str, word: &str) -> PyResult<f64> {
        let spec = self.inner.spec().clone();
        let h = SubgroupOracle::parse(&spec, subgroup, caps().coset).map_err(pyerr)?;
        let x = words::parse_element(&spec, word).map_err(pyerr)?;
        Ok(degcom::coset_mass(&self.inner, &h, &x).map_err(pyerr)?.to_f64())
    }

    /// Mass of elements whose conjugacy class has size at most r.
    fn small_centralizer_mass(&self, r: u64, class_cap: u64) -> PyResult<f64> {
        Ok(mass_of_small_centralizers(&self.inner, r, class_cap)
            .map_err(pyerr)?
            .to_f64())
    }

    /// Deterministic i.i.d. draws (inverse CDF, fixed seed).
    fn sample(&self, seed: u64, count: usize) -> Vec<String> {
        let spec = self.inner.spec().clone();
        self.inner
            .sample(seed, count)
            .iter()
            .map(|x| words::render_element(&spec, x))
            .collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "Measure(group={:?}, atoms={}, mode={})",
            self.inner.spec().name(),
            self.inner.support_len(),
            self.inner.mode()
        )
    }
}

/// dc series over a ball or lazy-walk sequence; returns the JSON report.
#[pyfunction]
#[pyo3(signature = (group, seq, lo, hi, tail, float_mode = false))]
fn dc_sequence_json(
    group: &PyGroup,
    seq: &str,
    lo: u64,
    hi: u64,
    tail: usize,
    float_mode: bool,
) -> PyResult<String> {
    let spec = &group.spec;
    let sequence = match seq {
        "ball" => MeasureSeqSpec::BallUniform(spec.default_genset().clone()),
        "walk" => {
            let step = Measure::lazy_uniform_step(spec, spec.default_genset()).map_err(pyerr)?;
            MeasureSeqSpec::WalkPower(if float_mode { step.to_float() } else { step })
        }
        other => return Err(PyValueError::new_err(format!("unknown sequence {other:?}"))),
    };
    let rep = degcom::dc_sequence(spec, &sequence, lo..=hi, tail, &caps()).map_err(pyerr)?;
    Ok(report::render_report(
        &serde_json::json!({"group": spec.name(), "seq": seq, "n": format!("{lo}..{hi}"), "tail": tail}),
        &report::dc_report_json(spec.name(), seq, &rep),
    ))
}

/// cr series over the ball sequence; returns the JSON report.
#[pyfunction]
fn cr_sequence_json(group: &PyGroup, lo: u64, hi: u64, tail: usize) -> PyResult<String> {
    let spec = &group.spec;
    let seq = MeasureSeqSpec::BallUniform(spec.default_genset().clone());
    let rep = degcom::cr_sequence(spec, &seq, lo..=hi, tail, &caps()).map_err(pyerr)?;
    Ok(report::render_report(
        &serde_json::json!({"group": spec.name(), "seq": "ball", "n": format!("{lo}..{hi}"), "tail": tail}),
        &report::cr_report_json(spec.name(), "ball", &rep),
    ))
}

/// Coset-mass deviation curve; returns the JSON report.
#[pyfunction]
#[pyo3(signature = (group, subgroup, lo, hi, probes = None))]
fn index_curve_json(
    group: &PyGroup,
    subgroup: &str,
    lo: u64,
    hi: u64,
    probes: Option<Vec<String>>,
) -> PyResult<String> {
    let spec = &group.spec;
    let h = SubgroupOracle::parse(spec, subgroup, caps().coset).map_err(pyerr)?;
    let probe_elems: Vec<Element> = match probes {
        Some(ws) => ws
            .iter()
            .map(|w| words::parse_element(spec, w).map_err(pyerr))
            .collect::<PyResult<_>>()?,
        None => vec![spec.identity()],
    };
    let seq = MeasureSeqSpec::BallUniform(spec.default_genset().clone());
    let curve = degcom::index_measurement_curve(spec, &seq, &h, &probe_elems, lo..=hi, &caps())
        .map_err(pyerr)?;
    Ok(report::render_report(
        &serde_json::json!({"group": spec.name(), "subgroup": subgroup, "n": format!("{lo}..{hi}")}),
        &report::index_curve_json(spec.name(), "ball", &curve),
    ))
}

/// ceil(1 + 32 (1-c)^2 / (c^4 eps^2)); c and eps parse exactly
/// ("0.25", "1/4").
#[pyfunction]
fn mixing_bound(c: &str, eps: &str) -> PyResult<u64> {
    let params = MixingParams::new(
        degcom::parse_rational(c).map_err(pyerr)?,
        degcom::parse_rational(eps).map_err(pyerr)?,
    )
    .map_err(pyerr)?;
    degcom::mixing_bound(&params).map_err(pyerr)
}

/// 1/(m^2 d) as (exact, float).
#[pyfunction]
fn neumann_lower_bound(m: u64, d: u64) -> PyResult<(String, f64)> {
    let r = degcom::neumann_lower_bound(m, d).map_err(pyerr)?;
    let f = degcom::Scalar::Rational(r.clone()).to_f64();
    Ok((format!("{}/{}", r.numer(), r.denom()), f))
}

/// 1/2 + 1/(2q) as (exact, float).
#[pyfunction]
fn gustafson_upper_bound(q: u64) -> PyResult<(String, f64)> {
    let r = degcom::gustafson_upper_bound(q).map_err(pyerr)?;
    let f = degcom::Scalar::Rational(r.clone()).to_f64();
    Ok((format!("{}/{}", r.numer(), r.denom()), f))
}

/// (1/q) sum of 1/[G:C_G(t)] over a central transversal; None entries
/// mean infinite index.
#[pyfunction]
fn dc_central_formula(q: u64, indices: Vec<Option<u64>>) -> PyResult<(String, f64)> {
    let r = degcom::dc_central_formula(q, &indices).map_err(pyerr)?;
    let f = degcom::Scalar::Rational(r.clone()).to_f64();
    Ok((format!("{}/{}", r.numer(), r.denom()), f))
}

/// Structural checks over the finite catalog; JSON verdict list.
#[pyfunction]
fn verify_catalog_json() -> String {
    let verdicts = finite::verify_catalog();
    report::render_report(
        &serde_json::json!({"suite": "catalog"}),
        &report::verdicts_json(&verdicts),
    )
}

/// Walk uniformity at the mixing bound for one subgroup; JSON report.
#[pyfunction]
fn verify_rw_uniform_json(group: &PyGroup, subgroup: &str, eps: &str) -> PyResult<String> {
    let spec = &group.spec;
    let h = SubgroupOracle::parse(spec, subgroup, caps().coset).map_err(pyerr)?;
    let step = Measure::lazy_uniform_step(spec, spec.default_genset()).map_err(pyerr)?;
    let epsilon = degcom::parse_rational(eps).map_err(pyerr)?;
    let rep = degcom::verify_uniform_measurement(
        spec,
        &step,
        &[h],
        &epsilon,
        &[spec.identity()],
        &caps(),
    )
    .map_err(pyerr)?;
    Ok(report::render_report(
        &serde_json::json!({"group": spec.name(), "subgroup": subgroup, "eps": eps}),
        &report::uniformity_json(&rep),
    ))
}

/// Neumann decomposition of a catalog group; JSON with the checks.
#[pyfunction]
fn neumann_json(name: &str) -> PyResult<String> {
    let t = finite::catalog_table(name).map_err(pyerr)?;
    let nd = finite::neumann_decompose(&t, name);
    Ok(report::render_report(
        &serde_json::json!({"group": name}),
        &serde_json::json!({
            "alpha": nd.alpha.to_string(),
            "r": nd.r.to_string(),
            "index_gamma": nd.index_gamma,
            "order_h": nd.order_h,
            "max_class_in_gamma": nd.max_class_in_gamma,
            "pass": nd.pass,
            "checks": report::verdicts_json(&nd.checks),
        }),
    ))
}

#[pymodule]
fn degcom_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", report::TOOL_VERSION)?;
    m.add_class::<PyGroup>()?;
    m.add_class::<PyMeasure>()?;
    m.add_function(wrap_pyfunction!(dc_sequence_json, m)?)?;
    m.add_function(wrap_pyfunction!(cr_sequence_json, m)?)?;
    m.add_function(wrap_pyfunction!(index_curve_json, m)?)?;
    m.add_function(wrap_pyfunction!(mixing_bound, m)?)?;
    m.add_function(wrap_pyfunction!(neumann_lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(gustafson_upper_bound, m)?)?;
    m.add_function(wrap_pyfunction!(dc_central_formula, m)?)?;
    m.add_function(wrap_pyfunction!(verify_catalog_json, m)?)?;
    m.add_function(wrap_pyfunction!(verify_rw_uniform_json, m)?)?;
    m.add_function(wrap_pyfunction!(neumann_json, m)?)?;
    Ok(())
}
