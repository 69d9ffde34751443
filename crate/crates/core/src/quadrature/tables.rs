// Generated Gauss-Legendre and collapsed Gauss-Jacobi tables.
//
// Segment rules live on [0, 1]; triangle rules on the reference triangle
// {(0,0), (1,0), (0,1)} are conical products of an n-point Gauss-Jacobi(1, 0)
// rule and an n-point Gauss-Legendre rule. Both are exact to degree 2n - 1.

pub(super) const MAX_POINTS: usize = 11;

/// `(point, weight)` pairs of the n-point Gauss-Legendre rule on [0, 1], index n - 1.
pub(super) static GAUSS_LEGENDRE: [&[(f64, f64)]; MAX_POINTS] = [
    &[
        (5.0000000000000000e-1, 1.0000000000000000),
    ],
    &[
        (2.1132486540518712e-1, 5.0000000000000000e-1),
        (7.8867513459481288e-1, 5.0000000000000000e-1),
    ],
    &[
        (1.1270166537925831e-1, 2.7777777777777778e-1),
        (5.0000000000000000e-1, 4.4444444444444444e-1),
        (8.8729833462074169e-1, 2.7777777777777778e-1),
    ],
    &[
        (6.9431844202973712e-2, 1.7392742256872693e-1),
        (3.3000947820757187e-1, 3.2607257743127307e-1),
        (6.6999052179242813e-1, 3.2607257743127307e-1),
        (9.3056815579702629e-1, 1.7392742256872693e-1),
    ],
    &[
        (4.6910077030668004e-2, 1.1846344252809454e-1),
        (2.3076534494715845e-1, 2.3931433524968323e-1),
        (5.0000000000000000e-1, 2.8444444444444444e-1),
        (7.6923465505284155e-1, 2.3931433524968323e-1),
        (9.5308992296933200e-1, 1.1846344252809454e-1),
    ],
    &[
        (3.3765242898423986e-2, 8.5662246189585173e-2),
        (1.6939530676686774e-1, 1.8038078652406930e-1),
        (3.8069040695840155e-1, 2.3395696728634552e-1),
        (6.1930959304159845e-1, 2.3395696728634552e-1),
        (8.3060469323313226e-1, 1.8038078652406930e-1),
        (9.6623475710157601e-1, 8.5662246189585173e-2),
    ],
    &[
        (2.5446043828620738e-2, 6.4742483084434847e-2),
        (1.2923440720030278e-1, 1.3985269574463833e-1),
        (2.9707742431130142e-1, 1.9091502525255947e-1),
        (5.0000000000000000e-1, 2.0897959183673469e-1),
        (7.0292257568869858e-1, 1.9091502525255947e-1),
        (8.7076559279969722e-1, 1.3985269574463833e-1),
        (9.7455395617137926e-1, 6.4742483084434847e-2),
    ],
    &[
        (1.9855071751231884e-2, 5.0614268145188130e-2),
        (1.0166676129318663e-1, 1.1119051722668724e-1),
        (2.3723379504183551e-1, 1.5685332293894364e-1),
        (4.0828267875217510e-1, 1.8134189168918099e-1),
        (5.9171732124782490e-1, 1.8134189168918099e-1),
        (7.6276620495816449e-1, 1.5685332293894364e-1),
        (8.9833323870681337e-1, 1.1119051722668724e-1),
        (9.8014492824876812e-1, 5.0614268145188130e-2),
    ],
    &[
        (1.5919880246186955e-2, 4.0637194180787206e-2),
        (8.1984446336682103e-2, 9.0324080347428702e-2),
        (1.9331428364970480e-1, 1.3030534820146773e-1),
        (3.3787328829809554e-1, 1.5617353852000142e-1),
        (5.0000000000000000e-1, 1.6511967750062988e-1),
        (6.6212671170190446e-1, 1.5617353852000142e-1),
        (8.0668571635029520e-1, 1.3030534820146773e-1),
        (9.1801555366331790e-1, 9.0324080347428702e-2),
        (9.8408011975381304e-1, 4.0637194180787206e-2),
    ],
    &[
        (1.3046735741414140e-2, 3.3335672154344069e-2),
        (6.7468316655507745e-2, 7.4725674575290297e-2),
        (1.6029521585048780e-1, 1.0954318125799102e-1),
        (2.8330230293537640e-1, 1.3463335965499818e-1),
        (4.2556283050918439e-1, 1.4776211235737644e-1),
        (5.7443716949081561e-1, 1.4776211235737644e-1),
        (7.1669769706462360e-1, 1.3463335965499818e-1),
        (8.3970478414951220e-1, 1.0954318125799102e-1),
        (9.3253168334449226e-1, 7.4725674575290297e-2),
        (9.8695326425858586e-1, 3.3335672154344069e-2),
    ],
    &[
        (1.0885670926971504e-2, 2.7834283558086833e-2),
        (5.6468700115952350e-2, 6.2790184732452312e-2),
        (1.3492399721297534e-1, 9.3145105463867126e-2),
        (2.4045193539659409e-1, 1.1659688229599524e-1),
        (3.6522842202382751e-1, 1.3140227225512333e-1),
        (5.0000000000000000e-1, 1.3646254338895032e-1),
        (6.3477157797617249e-1, 1.3140227225512333e-1),
        (7.5954806460340591e-1, 1.1659688229599524e-1),
        (8.6507600278702466e-1, 9.3145105463867126e-2),
        (9.4353129988404765e-1, 6.2790184732452312e-2),
        (9.8911432907302850e-1, 2.7834283558086833e-2),
    ],
];

/// n-point Gauss-Jacobi rule on [0, 1] for the weight (1 - u), index n - 1.
pub(super) static GAUSS_JACOBI_10: [&[(f64, f64)]; MAX_POINTS] = [
    &[
        (3.3333333333333333e-1, 5.0000000000000000e-1),
    ],
    &[
        (1.5505102572168219e-1, 3.1804138174397717e-1),
        (6.4494897427831781e-1, 1.8195861825602283e-1),
    ],
    &[
        (8.8587959512703947e-2, 2.0093191373895963e-1),
        (4.0946686444073471e-1, 2.2924110635958625e-1),
        (7.8765946176084706e-1, 6.9826979901454123e-2),
    ],
    &[
        (5.7104196114517682e-2, 1.3550691343148812e-1),
        (2.7684301363812383e-1, 2.0346456801027136e-1),
        (5.8359043236891682e-1, 1.2984754760823244e-1),
        (8.6024013565621945e-1, 3.1180970950008082e-2),
    ],
    &[
        (3.9809857051468742e-2, 9.6781590226651679e-2),
        (1.9801341787360817e-1, 1.6717463809436957e-1),
        (4.3797481024738614e-1, 1.4638698708466981e-1),
        (6.9546427335363609e-1, 7.3908870072616670e-2),
        (9.0146491420117357e-1, 1.5747914521692276e-2),
    ],
    &[
        (2.9316427159784892e-2, 7.2310330725508684e-2),
        (1.4807859966848429e-1, 1.3554249723151862e-1),
        (3.3698469028115430e-1, 1.4079255378819893e-1),
        (5.5867151877155013e-1, 9.8661150890655264e-2),
        (7.6923386203005450e-1, 4.3955165550508976e-2),
        (9.2694567131974111e-1, 8.7383018136095318e-3),
    ],
    &[
        (2.2479386438712498e-2, 5.5967363423491051e-2),
        (1.1467905316090423e-1, 1.1050925819087460e-1),
        (2.6578982278458947e-1, 1.2739089729958833e-1),
        (4.5284637366944462e-1, 1.0712506569587367e-1),
        (6.4737528288683036e-1, 6.6384696465491470e-2),
        (8.1975930826310764e-1, 2.7408356721873475e-2),
        (9.4373743946307785e-1, 5.2143622028074041e-3),
    ],
    &[
        (1.7779915147363452e-2, 4.4550804361555931e-2),
        (9.1323607899793956e-2, 9.1119023636373626e-2),
        (2.1430847939563076e-1, 1.1250579947088737e-1),
        (3.7193216458327230e-1, 1.0604735943593001e-1),
        (5.4518668480342665e-1, 7.9199599492319160e-2),
        (7.1317524285556948e-1, 4.5439319504698898e-2),
        (8.5563374295785443e-1, 1.7842902655986208e-2),
        (9.5536604471003015e-1, 3.2951914422487989e-3),
    ],
    &[
        (1.4412409648876549e-2, 3.6278003523279871e-2),
        (7.4387389709196045e-2, 7.6074255109308163e-2),
        (1.7611665616299528e-1, 9.8533742172345705e-2),
        (3.0966757992763782e-1, 1.0030880919336829e-1),
        (4.6197040108101093e-1, 8.4358321844920349e-2),
        (6.1811723469529402e-1, 5.8401195295165111e-2),
        (7.6282301518503961e-1, 3.1804821491054001e-2),
        (8.8192102121000130e-1, 1.2060004284785379e-2),
        (9.6374218711679054e-1, 2.1808470857731309e-3),
    ],
    &[
        (1.1917613432415597e-2, 3.0099508024037023e-2),
        (6.1732071877148126e-2, 6.4287154509082573e-2),
        (1.4711144964307024e-1, 8.6211300289176036e-2),
        (2.6115967600845624e-1, 9.2696893677723416e-2),
        (3.9463984688578684e-1, 8.4557109690827332e-2),
        (5.3673876571566063e-1, 6.6053075563350379e-2),
        (6.7594446167666511e-1, 4.3401906407150626e-2),
        (8.0097892103689885e-1, 2.2774591453263033e-2),
        (9.0171098779014677e-1, 8.4193197829831874e-3),
        (9.6997096783851350e-1, 1.4991406024063940e-3),
    ],
    &[
        (1.0018280461680406e-2, 2.5367340688141426e-2),
        (5.2035451127180553e-2, 5.4938091132871498e-2),
        (1.2461922514444307e-1, 7.5620048057186998e-2),
        (2.2284060704383786e-1, 8.4659422884017621e-2),
        (3.4000815791466519e-1, 8.1879102988063470e-2),
        (4.6813761308958404e-1, 6.9531875158183050e-2),
        (5.9849727976713918e-1, 5.1591360672297580e-2),
        (7.2220328489096793e-1, 3.2641546713833346e-2),
        (8.3082489962281857e-1, 1.6663623451680692e-2),
        (9.1695838655259485e-1, 6.0439209604797758e-3),
        (9.7472637960247965e-1, 1.0636672932445414e-3),
    ],
];
