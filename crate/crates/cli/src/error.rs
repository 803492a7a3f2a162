use hgm_core::char_sums::CharSumError;
use hgm_core::classical_series::SeriesError;
use hgm_core::hg_datum::DatumError;
use hgm_core::modular_forms::ModularError;
use hgm_core::padic_congruence::PadicError;
use hgm_core::period_integrator::PeriodError;
use hgm_core::tables::TableError;

/// Errors sorted by exit code.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// bad arguments or parameters outside a routine's hypotheses (exit 2)
    Usage(String),
    /// network, fixtures, data files, output files (exit 3)
    Infra(String),
    /// a computation that could not be completed (exit 1)
    Math(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Math(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Infra(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Infra(m) | CliError::Math(m) => m,
        }
    }
}

impl From<ModularError> for CliError {
    fn from(e: ModularError) -> Self {
        let m = e.to_string();
        match e {
            ModularError::Network(_) | ModularError::Fixture(_) | ModularError::CoefficientUnavailable(_) => CliError::Infra(m),
            ModularError::UnknownLabel(_) | ModularError::BadArgument(_) | ModularError::UnknownSeries(_) => CliError::Usage(m),
            _ => CliError::Math(m),
        }
    }
}

impl From<DatumError> for CliError {
    fn from(e: DatumError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<CharSumError> for CliError {
    fn from(e: CharSumError) -> Self {
        let m = e.to_string();
        match e {
            CharSumError::Datum(_)
            | CharSumError::Field(_)
            | CharSumError::BadReduction
            | CharSumError::NoOrderMElement { .. }
            | CharSumError::NotSelfDual
            | CharSumError::NotDefinedOverQ
            | CharSumError::BadPrime(_)
            | CharSumError::NeedsLambdaOne
            | CharSumError::UnknownIdentity(_)
            | CharSumError::Hypothesis(_)
            | CharSumError::FieldTooLargeForRecursion { .. } => CliError::Usage(m),
            _ => CliError::Math(m),
        }
    }
}

impl From<TableError> for CliError {
    fn from(e: TableError) -> Self {
        match e {
            TableError::Modular(m) => m.into(),
            TableError::CharSum(c) => c.into(),
            TableError::Data(m) => CliError::Infra(format!("table data: {m}")),
            TableError::UnknownTable(_) | TableError::UnknownPair(_) => CliError::Usage(e.to_string()),
            TableError::NotIntegral(_) => CliError::Math(e.to_string()),
        }
    }
}

impl From<SeriesError> for CliError {
    fn from(e: SeriesError) -> Self {
        match e {
            SeriesError::NonTerminating | SeriesError::BadParameters | SeriesError::DenominatorPole { .. } | SeriesError::GammaPole(_) => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Math(e.to_string()),
        }
    }
}

impl From<PadicError> for CliError {
    fn from(e: PadicError) -> Self {
        match e {
            PadicError::CoefficientUnavailable(m) => m.into(),
            PadicError::UnknownCase(_) | PadicError::PrimeOutOfRange { .. } | PadicError::CutoffTooLarge { .. } => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Math(e.to_string()),
        }
    }
}

impl From<PeriodError> for CliError {
    fn from(e: PeriodError) -> Self {
        match e {
            PeriodError::Modular(m) => m.into(),
            PeriodError::UnknownCase(_) | PeriodError::UnknownIntegrand(_) => CliError::Usage(e.to_string()),
            _ => CliError::Math(e.to_string()),
        }
    }
}
