// (t, p, dof) for cases 0..50
const WELCH_REFERENCE: [(f64, f64, f64); 50] = [
    (0.49890710251832599166, 0.65872020523934461062, 2.4762149982139159686),
    (-0.094570074337592627599, 0.92761685677695049656, 6.2476529472325179479),
    (1.6632339805050958081, 0.13068039670263949312, 8.9857031823650346461),
    (1.3282628825521047813, 0.23432550310383699213, 5.7559894200642554127),
    (-0.15303212646370484591, 0.88175057926384919134, 8.9958237438122202156),
    (0.21532975484576863334, 0.83265474502746182492, 13.82385537177751143),
    (2.5216790648209636403, 0.039667673710431718225, 7.0098058760392869131),
    (1.9934183516511378503, 0.1450682379490107929, 2.8486070453326016736),
    (-0.64491877545982487638, 0.54617713112293733426, 5.2351746954596565494),
    (-2.7105331438278087394, 0.042320479451257701374, 4.9919113066030209347),
    (1.4228688915263312118, 0.19025943091319873183, 8.5399760791879525778),
    (1.0797396890524305733, 0.30118010953180285532, 12.17728613950149947),
    (-3.2624705250185302455, 0.013142777557524668293, 7.2551451390720276358),
    (1.4179865727776188391, 0.18289333188710506923, 11.42303174637817585),
    (0.95672854134925363929, 0.41048754342078426085, 2.9445158990905419476),
    (-0.36236958551561439832, 0.73648863949982838989, 3.7658500455898655181),
    (0.033374561961748859205, 0.97419570180536054334, 7.978748764766376146),
    (0.35098045490348178304, 0.73327737019830432012, 9.4797421127047611462),
    (0.25276084310854861155, 0.83746658300477074288, 1.1735902395437968083),
    (0.66594291697515184347, 0.52331681735569270486, 8.3975261614215924586),
    (-0.42679395921659227618, 0.67563597152041524341, 14.890191905070150112),
    (-1.8643370673053234425, 0.17827992071238881053, 2.4762149982139159686),
    (0.6402922990534295333, 0.54346680458699965439, 6.6299205229320247224),
    (1.5172888341518257356, 0.16719708136538196537, 8.1024262981684429565),
    (0.9787717368269606993, 0.36581072895178582463, 5.9475149597955738373),
    (-0.48802344086474816437, 0.63606130988010943727, 9.9952172799497598985),
    (0.66851145038771784318, 0.51477503685789760195, 13.875865681901079935),
    (1.7818662443725950589, 0.11791299020942606616, 7.0098058760392869131),
    (-0.79699745492144385364, 0.46509218021128549902, 4.5371223401180216176),
    (-0.3880935089859479124, 0.71228445951214501208, 5.5930939413867105282),
    (2.0668709196998330493, 0.093702366825754365891, 4.9919113066030209347),
    (0.88587269929163409584, 0.39994287459398816656, 8.5399760791879525778),
    (0.81005950736747716162, 0.43297739324517592407, 12.567468534755419377),
    (-0.45286418052665150717, 0.66387977038801010707, 7.2551451390720276358),
    (1.6128487677137807506, 0.13360579233980716685, 11.611501804697799852),
    (0.53234311833830066311, 0.63203483956123314972, 2.9445158990905419476),
    (0.072473917103122879664, 0.94590904129443421239, 3.7658500455898655181),
    (-1.1932966652762229061, 0.26968728996783143512, 7.3825516348663066909),
    (0.87639011954198639221, 0.4017060810202708499, 9.8401180436609020401),
    (5.0551721134626694188, 0.0018607641693214142961, 6.4690841430981177717),
    (1.4664235263264510749, 0.17162727872027732662, 10.575584781394406143),
    (0.65223365776440851235, 0.52419204993243510158, 14.890191905070150112),
    (2.389502438377245539, 0.11500077359186157254, 2.4762149982139159686),
    (0.29880503747614377012, 0.77426426490491179693, 6.6088798164697062049),
    (0.16460383700250741063, 0.87328828811891414602, 8.1024262981684429565),
    (3.1896443658949189848, 0.019073891300369420026, 5.9475149597955738373),
    (-0.43678650907032142351, 0.67157388941124430598, 9.9704176107703489704),
    (1.1940811099294729774, 0.25267340906907360674, 13.726787240960811114),
    (0.52404604820751035897, 0.6158800749568872637, 7.2507705304286440978),
    (0.89408360613805527543, 0.42582418541553498621, 3.6845817982705005789),
];
// 1..5 vs 2..6: -1.0 0.34659350708733424783 8.0
const BETA_REFERENCE: &[(f64, f64, f64, f64)] = &[
    (0.5, 0.5, 0.01, 0.063768560858519848583),
    (0.5, 0.5, 0.1, 0.20483276469913345754),
    (0.5, 0.5, 0.3, 0.36901011956554537504),
    (0.5, 0.5, 0.5, 0.5),
    (0.5, 0.5, 0.7, 0.6309898804344545864),
    (0.5, 0.5, 0.9, 0.79516723530086657191),
    (0.5, 0.5, 0.99, 0.93623143914148012367),
    (0.5, 1.0, 0.01, 0.10000000000000000104),
    (0.5, 1.0, 0.1, 0.31622776601683794198),
    (0.5, 1.0, 0.3, 0.54772255750516610332),
    (0.5, 1.0, 0.5, 0.7071067811865475244),
    (0.5, 1.0, 0.7, 0.83666002653407552144),
    (0.5, 1.0, 0.9, 0.9486832980505138113),
    (0.5, 1.0, 0.99, 0.99498743710661995027),
    (0.5, 3.0, 0.01, 0.18625375000000000191),
    (0.5, 3.0, 0.1, 0.55458444465202953868),
    (0.5, 3.0, 0.3, 0.8400694725735485172),
    (0.5, 3.0, 0.5, 0.95017473721942323591),
    (0.5, 3.0, 0.7, 0.99039630640971192544),
    (0.5, 3.0, 0.9, 0.99967502532072891655),
    (0.5, 3.0, 0.99, 0.99999968632104455276),
    (0.5, 12.0, 0.01, 0.37306529393795786929),
    (0.5, 12.0, 0.1, 0.88447714573316784305),
    (0.5, 12.0, 0.3, 0.9962251034199270787),
    (0.5, 12.0, 0.5, 0.99994629241053764108),
    (0.5, 12.0, 0.7, 0.99999989923451989243),
    (0.5, 12.0, 0.9, 0.99999999999983081867),
    (0.5, 12.0, 0.99, 1.0),
    (1.0, 0.5, 0.01, 0.0050125628933800453701),
    (1.0, 0.5, 0.1, 0.051316701949486203326),
    (1.0, 0.5, 0.3, 0.16333997346592444539),
    (1.0, 0.5, 0.5, 0.2928932188134524756),
    (1.0, 0.5, 0.7, 0.452277442494833846),
    (1.0, 0.5, 0.9, 0.68377223398316210191),
    (1.0, 0.5, 0.99, 0.89999999999999995559),
    (1.0, 1.0, 0.01, 0.010000000000000000208),
    (1.0, 1.0, 0.1, 0.10000000000000000555),
    (1.0, 1.0, 0.3, 0.2999999999999999889),
    (1.0, 1.0, 0.5, 0.5),
    (1.0, 1.0, 0.7, 0.69999999999999995559),
    (1.0, 1.0, 0.9, 0.9000000000000000222),
    (1.0, 1.0, 0.99, 0.98999999999999999112),
    (1.0, 3.0, 0.01, 0.029701000000000000612),
    (1.0, 3.0, 0.1, 0.27100000000000001349),
    (1.0, 3.0, 0.3, 0.65699999999999998368),
    (1.0, 3.0, 0.5, 0.875),
    (1.0, 3.0, 0.7, 0.97299999999999998801),
    (1.0, 3.0, 0.9, 0.99900000000000000067),
    (1.0, 3.0, 0.99, 0.999999),
    (1.0, 12.0, 0.01, 0.11361512828387072158),
    (1.0, 12.0, 0.1, 0.7175704635190000209),
    (1.0, 12.0, 0.3, 0.98615871279899999737),
    (1.0, 12.0, 0.5, 0.999755859375),
    (1.0, 12.0, 0.7, 0.999999468559),
    (1.0, 12.0, 0.9, 0.999999999999),
    (1.0, 12.0, 0.99, 1.0),
    (2.5, 0.5, 0.01, 3.4075027649461729791e-6),
    (2.5, 0.5, 0.1, 0.0011144375415074220221),
    (2.5, 0.5, 0.3, 0.018927124071945651653),
    (2.5, 0.5, 0.5, 0.07558681842161243795),
    (2.5, 0.5, 0.7, 0.20311066372005490785),
    (2.5, 0.5, 0.9, 0.48958974456442755456),
    (2.5, 0.5, 0.99, 0.8310822789720564319),
    (2.5, 1.0, 0.01, 0.00001000000000000000052),
    (2.5, 1.0, 0.1, 0.0031622776601683797709),
    (2.5, 1.0, 0.3, 0.04929503017546494565),
    (2.5, 1.0, 0.5, 0.1767766952966368811),
    (2.5, 1.0, 0.7, 0.40996341300169695349),
    (2.5, 1.0, 0.9, 0.76843347142091622507),
    (2.5, 1.0, 0.99, 0.97518718710819819576),
    (2.5, 3.0, 0.01, 0.000077629375000000004017),
    (2.5, 3.0, 0.1, 0.021483723853768929886),
    (2.5, 3.0, 0.3, 0.2412375539211815825),
    (2.5, 3.0, 0.5, 0.59109707489812957118),
    (2.5, 3.0, 0.7, 0.87885906662238793735),
    (2.5, 3.0, 0.9, 0.9941608036508103086),
    (2.5, 3.0, 0.99, 0.99999351118026300978),
    (2.5, 12.0, 0.01, 0.0016091643979290936084),
    (2.5, 12.0, 0.1, 0.25108213832761387718),
    (2.5, 12.0, 0.3, 0.89358236274751796064),
    (2.5, 12.0, 0.5, 0.99649597868813863717),
    (2.5, 12.0, 0.7, 0.99998814593589461691),
    (2.5, 12.0, 0.9, 0.99999999996863737888),
    (2.5, 12.0, 0.99, 1.0),
    (5.0, 0.5, 0.01, 2.4712578086395446223e-11),
    (5.0, 0.5, 0.1, 2.5705896992293734871e-6),
    (5.0, 0.5, 0.3, 0.00069130338576297612305),
    (5.0, 0.5, 0.5, 0.01011955973543371462),
    (5.0, 0.5, 0.7, 0.065262246168908148664),
    (5.0, 0.5, 0.9, 0.3166429150200123125),
    (5.0, 0.5, 0.99, 0.75715810910156239502),
    (5.0, 1.0, 0.01, 1.0000000000000001041e-10),
    (5.0, 1.0, 0.1, 0.000010000000000000002776),
    (5.0, 1.0, 0.3, 0.0024299999999999995504),
    (5.0, 1.0, 0.5, 0.03125),
    (5.0, 1.0, 0.7, 0.16806999999999994669),
    (5.0, 1.0, 0.9, 0.59049000000000007284),
    (5.0, 1.0, 0.99, 0.95099004989999995734),
    (5.0, 3.0, 0.01, 2.0651500000000002142e-9),
    (5.0, 3.0, 0.1, 0.00017650000000000004721),
    (5.0, 3.0, 0.3, 0.028795499999999995373),
    (5.0, 3.0, 0.5, 0.2265625),
    (5.0, 3.0, 0.7, 0.64706949999999989924),
    (5.0, 3.0, 0.9, 0.9743085000000000153),
    (5.0, 3.0, 0.99, 0.99996603746984999991),
    (5.0, 12.0, 0.01, 3.9843174580105020414e-7),
    (5.0, 12.0, 0.1, 0.017003998277879503805),
    (5.0, 12.0, 0.3, 0.55009588017509546116),
    (5.0, 12.0, 0.5, 0.9615936279296875),
    (5.0, 12.0, 0.7, 0.99973416869455149959),
    (5.0, 12.0, 0.9, 0.9999999987640875),
    (5.0, 12.0, 0.99, 1.0),
    (10.0, 0.5, 0.01, 1.770034965528574304e-21),
    (10.0, 0.5, 0.1, 1.8480273740563749512e-11),
    (10.0, 0.5, 0.3, 1.2205229279531706307e-6),
    (10.0, 0.5, 0.5, 0.00023344743474862239543),
    (10.0, 0.5, 0.7, 0.0083225048624642059353),
    (10.0, 0.5, 0.9, 0.15164090963470996856),
    (10.0, 0.5, 0.99, 0.65792817515678432735),
    (10.0, 1.0, 0.01, 1.0000000000000002082e-20),
    (10.0, 1.0, 0.1, 1.0000000000000005551e-10),
    (10.0, 1.0, 0.3, 5.9048999999999978147e-6),
    (10.0, 1.0, 0.5, 0.0009765625),
    (10.0, 1.0, 0.7, 0.028247524899999982079),
    (10.0, 1.0, 0.9, 0.34867844010000008602),
    (10.0, 1.0, 0.99, 0.90438207500880440887),
    (10.0, 3.0, 0.01, 6.4805500000000013466e-19),
    (10.0, 3.0, 0.1, 5.4550000000000029676e-9),
    (10.0, 3.0, 0.3, 0.00020637625499999992933),
    (10.0, 3.0, 0.5, 0.019287109375),
    (10.0, 3.0, 0.7, 0.25281534785499989355),
    (10.0, 3.0, 0.9, 0.88913002225500005678),
    (10.0, 3.0, 0.99, 0.99979438392223336317),
    (10.0, 12.0, 0.01, 3.1901706783951254978e-15),
    (10.0, 12.0, 0.1, 0.000012421666793011426144),
    (10.0, 12.0, 0.3, 0.067572766995033940259),
    (10.0, 12.0, 0.5, 0.6681880950927734375),
    (10.0, 12.0, 0.7, 0.99125984199603747246),
    (10.0, 12.0, 0.9, 0.99999987677967481974),
    (10.0, 12.0, 0.99, 0.99999999999999999973),
    (30.0, 0.5, 0.01, 1.030781546620913131e-61),
    (30.0, 0.5, 0.1, 1.0793411337245563544e-31),
    (30.0, 0.5, 0.3, 2.5072056468159353766e-17),
    (30.0, 0.5, 0.5, 1.3302059355529229579e-10),
    (30.0, 0.5, 0.7, 4.0772109946605518565e-6),
    (30.0, 0.5, 0.9, 0.012282448499852759775),
    (30.0, 0.5, 0.99, 0.43933436890525101195),
    (30.0, 1.0, 0.01, 1.0000000000000006245e-60),
    (30.0, 1.0, 0.1, 1.0000000000000016653e-30),
    (30.0, 1.0, 0.3, 2.0589113209464877141e-16),
    (30.0, 1.0, 0.5, 9.3132257461547851563e-10),
    (30.0, 1.0, 0.7, 0.00002253934029069221519),
    (30.0, 1.0, 0.9, 0.04239115827521623489),
    (30.0, 1.0, 0.99, 0.73970037338828022364),
    (30.0, 3.0, 0.01, 4.8644650000000030359e-58),
    (30.0, 3.0, 0.1, 4.0465000000000066906e-28),
    (30.0, 3.0, 0.3, 5.1441899353847997095e-14),
    (30.0, 3.0, 0.5, 1.2316741049289703369e-7),
    (30.0, 3.0, 0.7, 0.0011686647940723916669),
    (30.0, 3.0, 0.9, 0.36668351908062031602),
    (30.0, 3.0, 0.99, 0.99600655276731957933),
    (30.0, 12.0, 0.01, 2.8389582777804360187e-51),
    (30.0, 12.0, 0.1, 1.0319624955678669603e-21),
    (30.0, 12.0, 0.3, 1.5114644703570527719e-8),
    (30.0, 12.0, 0.5, 0.0021620024672301951796),
    (30.0, 12.0, 0.7, 0.40104779034960977014),
    (30.0, 12.0, 0.9, 0.99951027691021486669),
    (30.0, 12.0, 0.99, 0.99999999999999396263),
];
