use std::ffi::CString;

use pyo3::prelude::*;
use pyo3::types::PyDict;

fn run(script: &str) {
    Python::with_gil(|py| {
        let m = PyModule::new(py, "vlgscan").unwrap();
        vlgscan_py::vlgscan_module(&m).unwrap();
        let globals = PyDict::new(py);
        globals.set_item("vlgscan", m).unwrap();
        let code = CString::new(script).unwrap();
        if let Err(e) = py.run(&code, Some(&globals), None) {
            panic!("{e}");
        }
    });
}

#[test]
fn search_through_python() {
    run(r#"
idx = vlgscan.Index.build(b"abracadabra")
p = vlgscan.parse_pattern("ab[2,5]ra")
assert p.gaps == [(2, 5)] and str(p) == "ab[2,5]ra"
for s in vlgscan.STRATEGIES:
    assert idx.search(p, strategy=s).endpoints == [2, 9]
r = idx.search(vlgscan.parse_pattern("a[1,4]a[1,4]a"), tuples=True, tuple_cap=2)
assert r.tuples == [[0, 3, 5], [0, 3, 7]] and r.truncated
assert idx.occurrences(b"abra") == [0, 7]
"#);
}

#[test]
fn errors_become_python_exceptions() {
    run(r#"
for bad in ("ab[5,2]ra", "ab[2,5"):
    try:
        vlgscan.parse_pattern(bad)
    except ValueError:
        pass
    else:
        raise AssertionError(bad)
idx = vlgscan.Index.build(b"abc")
try:
    idx.search(vlgscan.parse_pattern("a[0,1]b"), strategy="quick")
except ValueError:
    pass
else:
    raise AssertionError("unknown strategy accepted")
try:
    vlgscan.Index.load("/nonexistent/file.idx")
except OSError:
    pass
else:
    raise AssertionError("missing file loaded")
"#);
}

#[test]
fn generated_patterns_agree_with_oracle() {
    run(r#"
import random
rng = random.Random(3)
text = bytes(rng.choice(b"ab") for _ in range(3000))
idx = vlgscan.Index.build(text)
pats = vlgscan.generate_patterns(idx, k=3, m=3, gap=(4, 30), count=8, seed=9)
assert len(pats) == 8
for p in pats:
    truth = vlgscan.oracle_search(text, p)
    got = idx.search(p, tuples=True)
    assert got.endpoints == truth.endpoints and got.tuples == truth.tuples
"#);
}
