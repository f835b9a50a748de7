//! Runs python/smoke_test.py against the module in an embedded interpreter,
//! so the bindings are exercised without building and copying the shared library.

use std::ffi::CString;

use pyo3::prelude::*;
use pyo3::types::PyDict;

#[test]
fn smoke_script_passes() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../python/smoke_test.py");
    let src = CString::new(std::fs::read_to_string(path).expect("read smoke_test.py")).unwrap();
    Python::initialize();
    Python::attach(|py| -> PyResult<()> {
        let module = pyo3::wrap_pymodule!(etalift_py::etalift_py)(py);
        py.import("sys")?.getattr("modules")?.set_item("etalift_py", module)?;
        let globals = PyDict::new(py);
        globals.set_item("__name__", "smoke")?;
        py.run(&src, Some(&globals), None)?;
        let code: i32 = globals.get_item("main")?.expect("main defined").call0()?.extract()?;
        assert_eq!(code, 0);
        Ok(())
    })
    .unwrap_or_else(|e| panic!("smoke test raised: {e}"));
}
