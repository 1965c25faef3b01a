use crate::{parse_group, Failure};
use clap::{Args, ValueEnum};
use htk_core::fundsol::{
    folland_kaplan, fundamental_conformal, fundamental_nonconformal, riesz_kernel_negative, thick_fundamental,
    ConformalMethod, NonconformalMethod,
};
use htk_core::group::GroupPoint;
use htk_core::kernels::{
    bg_kernel, composite_kernel, heat_kernel, modified_kernel, poisson_kernel_elliptic, poisson_kernel_parabolic,
    thick_kernel, PoissonVariant, SignedOrder,
};
use htk_core::quadrature::{Estimate, QuadratureConfig};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[value(rename_all = "snake_case")]
#[serde(rename_all = "snake_case")]
pub enum Kernel {
    /// p(g, t)
    Heat,
    /// K_(s)(g, t)
    Modified,
    /// q_(s)(g, t, y)
    Thick,
    /// Baouendi–Grushin heat kernel with pole (w2, sigma2)
    Bg,
    /// K_(-s,s)(g, tau, t)
    Composite,
    /// parabolic Poisson kernel at (g, t, y)
    PoissonPar,
    /// elliptic Poisson kernel at (g, y)
    PoissonEll,
    /// E_(s)(g)
    FundsolConf,
    /// E^(s)(g)
    FundsolNonconf,
    /// e_(s)(g, y)
    ThickFund,
    /// fundamental solution of the sub-Laplacian
    Folland,
    /// E^(-s)(g)
    RieszNeg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Closed,
    Direct,
    Hypergeometric,
    Subordinated,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long, value_enum)]
    pub kernel: Kernel,
    #[arg(long, env = "HTK_GROUP", default_value = "h1")]
    pub group: String,
    /// first-layer coordinates, comma separated; zero if omitted
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
    /// centre coordinates, comma separated; zero if omitted
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: Option<String>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    pub s: f64,
    #[arg(long)]
    pub y: Option<f64>,
    #[arg(long)]
    pub tau: Option<f64>,
    /// use the conformal variant of the Poisson kernels
    #[arg(long)]
    pub conformal: bool,
    /// evaluation route for the fundamental solutions
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    /// dimension of the w-space for `bg`; the first-layer dimension if omitted
    #[arg(long)]
    pub n: Option<f64>,
    /// pole of `bg` in w, comma separated
    #[arg(long, allow_hyphen_values = true)]
    pub w2: Option<String>,
    /// pole of `bg` in σ, comma separated
    #[arg(long, allow_hyphen_values = true)]
    pub sigma2: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct EvalRecord {
    pub kernel: Kernel,
    pub group: String,
    pub z: Vec<f64>,
    pub sigma: Vec<f64>,
    pub t: Option<f64>,
    pub s: Option<f64>,
    pub y: Option<f64>,
    pub tau: Option<f64>,
    pub value: f64,
    pub error_estimate: f64,
}

fn parse_vector(text: Option<&str>, len: usize, name: &str) -> Result<Vec<f64>, Failure> {
    let Some(text) = text else {
        return Ok(vec![0.0; len]);
    };
    let v = text
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| Failure::Usage(format!("{name}: `{x}` is not a number"))))
        .collect::<Result<Vec<_>, _>>()?;
    if v.len() != len {
        return Err(Failure::Usage(format!("{name} needs {len} components, got {}", v.len())));
    }
    Ok(v)
}

fn required(v: Option<f64>, name: &str, kernel: Kernel) -> Result<f64, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("--{name} is required for kernel {kernel:?}").to_lowercase()))
}

fn positive_time(t: Option<f64>, kernel: Kernel) -> Result<f64, Failure> {
    let t = required(t, "t", kernel)?;
    if !(t > 0.0) {
        return Err(Failure::Usage("t must be positive".into()));
    }
    Ok(t)
}

fn conformal_method(m: Option<Method>) -> Result<ConformalMethod, Failure> {
    match m {
        None | Some(Method::Closed) => Ok(ConformalMethod::ClosedForm),
        Some(Method::Direct) => Ok(ConformalMethod::DirectIntegral),
        Some(other) => Err(Failure::Usage(format!("method {other:?} does not apply here").to_lowercase())),
    }
}

fn nonconformal_method(m: Option<Method>) -> Result<NonconformalMethod, Failure> {
    match m {
        None | Some(Method::Direct) => Ok(NonconformalMethod::DirectIntegral),
        Some(Method::Hypergeometric) => Ok(NonconformalMethod::Hypergeometric),
        Some(Method::Subordinated) => Ok(NonconformalMethod::Subordinated),
        Some(Method::Closed) => Err(Failure::Usage("there is no closed form for E^(s)".into())),
    }
}

pub fn evaluate(a: &EvalArgs, cfg: &QuadratureConfig) -> Result<EvalRecord, Failure> {
    let g = parse_group(&a.group)?;
    let kernel = a.kernel;
    let z = parse_vector(a.z.as_deref(), g.m(), "z")?;
    let sigma = parse_vector(a.sigma.as_deref(), g.k(), "sigma")?;
    let p = GroupPoint::new(z.clone(), sigma.clone());
    // kernels decay like Gaussians; only relative accuracy is meaningful
    let cfg = &cfg.with_abs_tol(1e-300);
    let order = || SignedOrder::new(a.s).map_err(Failure::from);
    let (mut t, mut s, mut y, mut tau) = (None, None, None, None);
    let est: Estimate = match kernel {
        Kernel::Heat => {
            t = Some(positive_time(a.t, kernel)?);
            heat_kernel(&g, &p, t.unwrap(), cfg)?
        }
        Kernel::Modified => {
            t = Some(positive_time(a.t, kernel)?);
            s = Some(a.s);
            modified_kernel(&g, order()?, &p, t.unwrap(), cfg)?
        }
        Kernel::Thick => {
            t = Some(positive_time(a.t, kernel)?);
            (s, y) = (Some(a.s), Some(a.y.unwrap_or(0.0)));
            thick_kernel(&g, order()?, &p, t.unwrap(), y.unwrap(), cfg)?
        }
        Kernel::Bg => {
            t = Some(positive_time(a.t, kernel)?);
            let w2 = parse_vector(a.w2.as_deref(), z.len(), "w2")?;
            let sigma2 = parse_vector(a.sigma2.as_deref(), g.k(), "sigma2")?;
            bg_kernel(a.n.unwrap_or(g.m() as f64), g.k(), &z, &sigma, &w2, &sigma2, t.unwrap(), cfg)?
        }
        Kernel::Composite => {
            t = Some(positive_time(a.t, kernel)?);
            tau = Some(positive_time(a.tau, kernel).map_err(|_| Failure::Usage("tau must be positive".into()))?);
            s = Some(a.s);
            composite_kernel(&g, order()?, &p, tau.unwrap(), t.unwrap(), cfg)?
        }
        Kernel::PoissonPar => {
            t = Some(positive_time(a.t, kernel)?);
            (s, y) = (Some(a.s), Some(required(a.y, "y", kernel)?));
            poisson_kernel_parabolic(&g, a.s, &p, t.unwrap(), y.unwrap(), variant(a.conformal), cfg)?
        }
        Kernel::PoissonEll => {
            (s, y) = (Some(a.s), Some(required(a.y, "y", kernel)?));
            poisson_kernel_elliptic(&g, a.s, &p, y.unwrap(), variant(a.conformal), cfg)?
        }
        Kernel::FundsolConf => {
            s = Some(a.s);
            fundamental_conformal(&g, a.s, &p, conformal_method(a.method)?, cfg)?
        }
        Kernel::FundsolNonconf => {
            s = Some(a.s);
            fundamental_nonconformal(&g, a.s, &p, nonconformal_method(a.method)?, cfg)?
        }
        Kernel::ThickFund => {
            (s, y) = (Some(a.s), Some(a.y.unwrap_or(0.0)));
            thick_fundamental(&g, a.s, &p, y.unwrap(), conformal_method(a.method)?, cfg)?
        }
        Kernel::Folland => Estimate::exact(folland_kaplan(&g, &p)?),
        Kernel::RieszNeg => {
            s = Some(a.s);
            riesz_kernel_negative(&g, a.s, &p, cfg)?
        }
    };
    Ok(EvalRecord {
        kernel,
        group: g.label().to_string(),
        z,
        sigma,
        t,
        s,
        y,
        tau,
        value: est.value,
        error_estimate: est.error,
    })
}

fn variant(conformal: bool) -> PoissonVariant {
    if conformal {
        PoissonVariant::Conformal
    } else {
        PoissonVariant::Nonconformal
    }
}
