//! Test suites as CSV: a header of parameter names, then one row of value names per test.

use crate::error::{Error, Result};
use crate::model::{SutModel, TestCase, TestSuite};

pub fn write_test_suite(suite: &TestSuite, model: &SutModel) -> Result<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(model.parameters.iter().map(|p| p.name.as_str()))
        .map_err(csv_err)?;
    for (i, test) in suite.tests.iter().enumerate() {
        if test.cells.len() != model.n_params() {
            return Err(Error::SuiteMismatch(format!(
                "test {} has {} cells for {} parameters",
                i + 1,
                test.cells.len(),
                model.n_params()
            )));
        }
        let mut row = Vec::with_capacity(test.cells.len());
        for (p, cell) in test.cells.iter().enumerate() {
            let v = cell.ok_or(Error::EmptyCell { test: i, param: p })?;
            row.push(model.parameters[p].values[v].as_str());
        }
        w.write_record(row).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("names are UTF-8"))
}

pub fn read_test_suite(text: &str, model: &SutModel) -> Result<TestSuite> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let parse_err = |e: csv::Error| {
        let line = e.position().map_or(1, |p| p.line() as usize);
        Error::parse("CSV suite", line, 1, e.to_string())
    };
    let header: Vec<String> = r
        .headers()
        .map_err(parse_err)?
        .iter()
        .map(str::to_string)
        .collect();
    let names: Vec<&str> = model.parameters.iter().map(|p| p.name.as_str()).collect();
    if header != names {
        return Err(Error::SuiteMismatch(format!(
            "header [{}] does not match the model parameters [{}]",
            header.join(","),
            names.join(",")
        )));
    }
    let mut tests = Vec::new();
    for record in r.records() {
        let record = record.map_err(parse_err)?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let mut values = Vec::with_capacity(record.len());
        for (p, field) in record.iter().enumerate() {
            let v = model.parameters[p].value_index(field).ok_or_else(|| {
                Error::parse(
                    "CSV suite",
                    line,
                    p + 1,
                    format!("'{field}' is not a value of {}", model.parameters[p].name),
                )
            })?;
            values.push(v);
        }
        tests.push(TestCase::full(&values));
    }
    Ok(TestSuite::new(tests))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::example1;

    #[test]
    fn empty_suite_is_header_only() {
        let text = write_test_suite(&TestSuite::default(), &example1()).unwrap();
        assert_eq!(text, "OS,Pl,Re,Or\n");
        assert!(read_test_suite(&text, &example1()).unwrap().is_empty());
    }

    #[test]
    fn roundtrip_and_refusals() {
        let m = example1();
        let suite = TestSuite::new(vec![TestCase::full(&[1, 0, 0, 1]), TestCase::full(&[4, 3, 1, 0])]);
        let text = write_test_suite(&suite, &m).unwrap();
        assert_eq!(text, "OS,Pl,Re,Or\nW,F,K,L\nA,A,F,P\n");
        assert_eq!(read_test_suite(&text, &m).unwrap().tests, suite.tests);

        let mut partial = suite.clone();
        partial.tests[1].cells[2] = None;
        assert!(matches!(
            write_test_suite(&partial, &m),
            Err(Error::EmptyCell { test: 1, param: 2 })
        ));
        assert!(read_test_suite("OS,Pl,Or,Re\n", &m).is_err());
        assert!(read_test_suite("OS,Pl,Re,Or\nW,F,K,X\n", &m).is_err());
        assert!(read_test_suite("OS,Pl,Re,Or\nW,F,K\n", &m).is_err());
    }
}
