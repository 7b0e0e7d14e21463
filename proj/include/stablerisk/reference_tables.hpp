#pragma once

#include <array>
#include <span>
#include <string_view>

namespace stablerisk::reference {

/// Reference super-additivity ratios at q = 0.05 for S(alpha, 0, 1, 0)
/// margins, by copula family. Entries are kept as printed so that their
/// precision is known; theta and tau are the dependence parameter and
/// Kendall's tau of the row.
inline constexpr std::array<double, 11> kAlphas = {0.2, 0.3, 0.4, 0.6, 0.9, 1.0,
                                                   1.1, 1.3, 1.6, 1.8, 2.0};

struct Row {
  std::string_view theta;
  std::string_view tau;
  std::array<std::string_view, 11> sr;
};

struct Table {
  std::string_view family;
  int nu;  // Student-t degrees of freedom, 0 otherwise
  std::span<const Row> rows;
};

inline constexpr Row kGaussianRows[] = {
    {"-1", "-1", {"5.0e-06", "3.5e-06", "2.7e-06", "1.9e-06", "1.3e-06", "1.2e-06", "1.1e-06", "9.8e-07", "8.8e-07", "8.4e-07", "7.9e-07"}},
    {"-0.99", "-0.9", {"0.5443", "0.3593", "0.2754", "0.1929", "0.1368", "0.1241", "0.1142", "0.0980", "0.0878", "0.0835", "0.0785"}},
    {"-0.89", "-0.7", {"2.4852", "1.2751", "0.8931", "0.5832", "0.4034", "0.3676", "0.3378", "0.2920", "0.2608", "0.2483", "0.2334"}},
    {"-0.59", "-0.4", {"8.7629", "3.2337", "1.9524", "1.1392", "0.7621", "0.6946", "0.6416", "0.5661", "0.5063", "0.4794", "0.4543"}},
    {"-0.45", "-0.3", {"11.3880", "3.9143", "2.2594", "1.2959", "0.8598", "0.7878", "0.7324", "0.6497", "0.5813", "0.5505", "0.5225"}},
    {"-0.16", "-0.1", {"15.3299", "4.8540", "2.7295", "1.5192", "1.0226", "0.9452", "0.8810", "0.7938", "0.7136", "0.6786", "0.6493"}},
    {"-0.02", "-0.01", {"16.0090", "5.0211", "2.8224", "1.5814", "1.0740", "0.9935", "0.9344", "0.8469", "0.7656", "0.7291", "0.7015"}},
    {"0", "0", {"15.8676", "5.0450", "2.8237", "1.5858", "1.0792", "1.0009", "0.9386", "0.8522", "0.7698", "0.7350", "0.7072"}},
    {"0.02", "0.01", {"16.1089", "5.0292", "2.8408", "1.5927", "1.0840", "1.0043", "0.9430", "0.8570", "0.7765", "0.7406", "0.7127"}},
    {"0.16", "0.1", {"15.6895", "4.9868", "2.8299", "1.6148", "1.1193", "1.0417", "0.9832", "0.9015", "0.8215", "0.7865", "0.7604"}},
    {"0.31", "0.2", {"14.0857", "4.7032", "2.7219", "1.5978", "1.1398", "1.0676", "1.0132", "0.9409", "0.8661", "0.8323", "0.8088"}},
    {"0.45", "0.3", {"11.9989", "4.2562", "2.5444", "1.5526", "1.1439", "1.0826", "1.0343", "0.9672", "0.9032", "0.8724", "0.8528"}},
    {"0.59", "0.4", {"9.5069", "3.6756", "2.3091", "1.4737", "1.1361", "1.0804", "1.0418", "0.9869", "0.9332", "0.9070", "0.8909"}},
    {"0.89", "0.7", {"3.2120", "1.8769", "1.4633", "1.1810", "1.0556", "1.0358", "1.0230", "1.0053", "0.9870", "0.9773", "0.9725"}},
    {"0.99", "0.9", {"1.2798", "1.1202", "1.0652", "1.0234", "1.0072", "1.0047", "1.0038", "1.0011", "0.9990", "0.9973", "0.9969"}},
    {"1", "1", {"1", "1.0000", "1.0000", "1", "1.0000", "1.0000", "1.0000", "1.0000", "1.0000", "1.0000", "1"}},
};

inline constexpr Row kStudentTRows[] = {
    {"-1", "-1", {"4.2e-06", "2.9e-06", "2.3e-06", "1.7e-06", "1.2e-06", "1.1e-06", "1e-06", "9.3e-07", "8.6e-07", "8.2e-07", "7.7e-07"}},
    {"-0.99", "-0.9", {"0.4496", "0.3004", "0.2311", "0.1658", "0.1198", "0.1104", "0.1027", "0.0927", "0.0858", "0.0816", "0.0769"}},
    {"-0.89", "-0.7", {"1.8897", "1.0421", "0.7376", "0.4997", "0.3557", "0.3281", "0.3061", "0.2763", "0.2550", "0.2429", "0.2294"}},
    {"-0.59", "-0.4", {"6.1498", "2.5362", "1.6017", "0.9842", "0.6844", "0.6331", "0.5929", "0.5358", "0.4920", "0.4700", "0.4484"}},
    {"-0.45", "-0.3", {"7.9169", "3.0426", "1.8669", "1.1213", "0.7806", "0.7217", "0.6767", "0.6141", "0.5638", "0.5401", "0.5172"}},
    {"-0.16", "-0.1", {"10.5219", "3.7700", "2.2448", "1.3357", "0.9367", "0.8715", "0.8222", "0.7521", "0.6935", "0.6670", "0.6446"}},
    {"-0.02", "-0.01", {"10.9465", "3.8993", "2.3270", "1.3924", "0.9894", "0.9217", "0.8736", "0.8050", "0.7456", "0.7187", "0.6970"}},
    {"0.00", "0", {"11.0378", "3.9264", "2.3414", "1.3982", "0.9942", "0.9271", "0.8787", "0.8102", "0.7511", "0.7241", "0.7028"}},
    {"0.02", "0.01", {"11.0536", "3.9473", "2.3387", "1.4050", "0.9961", "0.9327", "0.8839", "0.8157", "0.7561", "0.7296", "0.7088"}},
    {"0.16", "0.1", {"10.6819", "3.9086", "2.3511", "1.4276", "1.0338", "0.9721", "0.9250", "0.8599", "0.8015", "0.7760", "0.7572"}},
    {"0.31", "0.2", {"9.9593", "3.7179", "2.2905", "1.4310", "1.0600", "1.0041", "0.9607", "0.9005", "0.8466", "0.8225", "0.8059"}},
    {"0.45", "0.3", {"8.5283", "3.3891", "2.1585", "1.3972", "1.0739", "1.0241", "0.9848", "0.9332", "0.8860", "0.8641", "0.8503"}},
    {"0.59", "0.4", {"6.8569", "2.9793", "1.9817", "1.3481", "1.0743", "1.0328", "1.0005", "0.9585", "0.9195", "0.9002", "0.8894"}},
    {"0.89", "0.7", {"2.6423", "1.6706", "1.3521", "1.1307", "1.0340", "1.0180", "1.0087", "0.9957", "0.9820", "0.9752", "0.9717"}},
    {"0.99", "0.9", {"1.2236", "1.0999", "1.0502", "1.0177", "1.0045", "1.0028", "1.0018", "0.9997", "0.9982", "0.9972", "0.9968"}},
    {"1", "1", {"1.0000", "1", "1.0000", "1", "1", "1.0000", "1", "1.0000", "1.0000", "1.0000", "1.0000"}},
};

inline constexpr Row kFrankRows[] = {
    {"-709", "-1", {"0.0698", "0.0483", "0.0376", "0.0261", "0.0181", "0.0163", "0.0147", "0.0120", "0.0088", "0.0074", "0.0065"}},
    {"-38.28", "-0.9", {"2.3807", "1.1773", "0.7939", "0.4945", "0.3189", "0.2846", "0.2555", "0.2065", "0.1507", "0.1257", "0.1088"}},
    {"-11.41", "-0.7", {"8.4532", "3.1117", "1.8384", "1.0425", "0.6610", "0.5911", "0.5312", "0.4402", "0.3435", "0.3029", "0.2727"}},
    {"-4.16", "-0.4", {"13.5038", "4.4572", "2.4888", "1.3722", "0.8904", "0.8077", "0.7394", "0.6404", "0.5492", "0.5088", "0.4756"}},
    {"-2.92", "-0.3", {"14.7779", "4.6550", "2.6111", "1.4407", "0.9428", "0.8596", "0.7968", "0.6990", "0.6102", "0.5701", "0.5383"}},
    {"-0.91", "-0.1", {"15.8484", "4.9234", "2.7937", "1.5473", "1.0357", "0.9593", "0.8947", "0.8046", "0.7215", "0.6845", "0.6553"}},
    {"-0.09", "-0.01", {"15.9420", "5.0413", "2.8390", "1.5899", "1.0759", "0.9937", "0.9357", "0.8467", "0.7656", "0.7316", "0.7014"}},
    {"0", "0", {"16.0998", "5.0095", "2.8282", "1.5900", "1.0811", "0.9993", "0.9373", "0.8514", "0.7709", "0.7347", "0.7071"}},
    {"0.09", "0.01", {"15.9468", "5.0584", "2.8299", "1.5919", "1.0835", "1.0070", "0.9424", "0.8582", "0.7769", "0.7392", "0.7113"}},
    {"0.91", "0.1", {"15.8797", "5.0614", "2.8471", "1.6093", "1.1162", "1.0421", "0.9804", "0.8948", "0.8162", "0.7812", "0.7546"}},
    {"1.86", "0.2", {"15.7188", "5.0186", "2.8649", "1.6352", "1.1483", "1.0732", "1.0178", "0.9373", "0.8604", "0.8240", "0.7987"}},
    {"2.92", "0.3", {"15.0588", "4.9029", "2.8181", "1.6495", "1.1761", "1.1040", "1.0505", "0.9729", "0.8979", "0.8626", "0.8370"}},
    {"4.16", "0.4", {"14.2756", "4.7217", "2.7806", "1.6555", "1.1998", "1.1306", "1.0806", "1.0088", "0.9337", "0.8970", "0.8730"}},
    {"11.41", "0.7", {"9.9142", "3.8242", "2.4189", "1.5835", "1.2305", "1.1763", "1.1376", "1.0810", "1.0153", "0.9836", "0.9625"}},
    {"38.28", "0.9", {"3.4557", "2.0352", "1.5906", "1.2843", "1.1380", "1.1143", "1.0941", "1.0657", "1.0322", "1.0162", "1.0067"}},
    {"709", "1", {"1.0122", "1.0054", "1.0036", "1.0006", "1.0005", "1.0007", "1.0003", "1.0004", "1.0001", "1.0002", "1.0001"}},
};

inline constexpr Row kClaytonRows[] = {
    {"-1", "-1", {"5.8e-06", "4.2e-06", "3.3e-06", "2.4e-06", "1.8e-06", "1.7e-06", "1.6e-06", "1.4e-06", "1.3e-06", "1.2e-06", "1.1e-06"}},
    {"-0.95", "-0.9", {"0.9751", "0.5325", "0.3778", "0.2560", "0.1832", "0.1681", "0.1562", "0.1387", "0.1223", "0.1149", "0.1083"}},
    {"-0.82", "-0.7", {"3.0610", "1.4229", "0.9407", "0.5954", "0.4177", "0.3842", "0.3590", "0.3208", "0.2916", "0.2801", "0.2703"}},
    {"-0.57", "-0.4", {"6.7280", "2.6453", "1.6368", "0.9999", "0.6877", "0.6338", "0.5909", "0.5353", "0.4923", "0.4763", "0.4625"}},
    {"-0.46", "-0.3", {"8.5693", "3.2123", "1.9400", "1.1556", "0.7896", "0.7265", "0.6812", "0.6152", "0.5638", "0.5416", "0.5240"}},
    {"-0.18", "-0.1", {"13.8704", "4.5987", "2.6015", "1.4699", "0.9976", "0.9247", "0.8652", "0.7817", "0.7071", "0.6741", "0.6479"}},
    {"-0.02", "-0.01", {"15.7198", "4.9752", "2.8251", "1.5697", "1.0741", "0.9948", "0.9318", "0.8455", "0.7651", "0.7291", "0.7016"}},
    {"0.00", "0", {"16.0693", "4.9913", "2.8240", "1.5876", "1.0786", "0.9981", "0.9422", "0.8518", "0.7711", "0.7348", "0.7072"}},
    {"0.02", "0.01", {"15.6811", "4.9562", "2.7989", "1.5823", "1.0837", "1.0037", "0.9454", "0.8576", "0.7779", "0.7424", "0.7150"}},
    {"0.22", "0.1", {"12.3384", "4.2727", "2.5377", "1.5152", "1.0929", "1.0222", "0.9694", "0.9004", "0.8354", "0.8054", "0.7848"}},
    {"0.50", "0.2", {"7.9749", "3.2764", "2.1102", "1.3780", "1.0620", "1.0143", "0.9801", "0.9312", "0.8860", "0.8654", "0.8544"}},
    {"0.86", "0.3", {"4.9692", "2.4106", "1.7135", "1.2439", "1.0379", "1.0030", "0.9806", "0.9532", "0.9263", "0.9154", "0.9102"}},
    {"1.33", "0.4", {"3.2074", "1.8440", "1.4295", "1.1446", "1.0178", "0.9989", "0.9865", "0.9716", "0.9582", "0.9512", "0.9490"}},
    {"4.67", "0.7", {"1.3079", "1.1236", "1.0621", "1.0201", "1.0018", "1.0000", "0.9984", "0.9966", "0.9952", "0.9945", "0.9941"}},
    {"18", "0.9", {"1.0255", "1.0099", "1.0057", "1.0016", "0.9998", "1.0001", "0.9999", "0.9997", "0.9998", "0.9995", "0.9997"}},
    {"2e06", "1", {"1", "1", "1", "1", "1.0000", "1", "1", "1", "1.0000", "1", "1"}},
};

inline constexpr Row kGumbelRows[] = {
    {"1.00", "0", {"16.0952", "5.0635", "2.8016", "1.5854", "1.0807", "0.9984", "0.9403", "0.8519", "0.7711", "0.7349", "0.7077"}},
    {"1.01", "0.01", {"16.0678", "5.0694", "2.8456", "1.5901", "1.0820", "1.0034", "0.9438", "0.8545", "0.7738", "0.7386", "0.7112"}},
    {"1.11", "0.1", {"15.9600", "5.0510", "2.8431", "1.6124", "1.1137", "1.0306", "0.9742", "0.8887", "0.8084", "0.7738", "0.7459"}},
    {"1.25", "0.2", {"15.2526", "4.9554", "2.8090", "1.6174", "1.1346", "1.0620", "1.0070", "0.9236", "0.8465", "0.8094", "0.7845"}},
    {"1.43", "0.3", {"14.0699", "4.6658", "2.7374", "1.6078", "1.1502", "1.0810", "1.0275", "0.9535", "0.8804", "0.8460", "0.8232"}},
    {"1.67", "0.4", {"12.4740", "4.2964", "2.5933", "1.5756", "1.1609", "1.0940", "1.0461", "0.9807", "0.9125", "0.8800", "0.8596"}},
    {"2", "0.5", {"10.1809", "3.8287", "2.3758", "1.5114", "1.1523", "1.0994", "1.0567", "0.9995", "0.9416", "0.9122", "0.8946"}},
    {"3.33", "0.7", {"5.1980", "2.5551", "1.8028", "1.3201", "1.1080", "1.0779", "1.0533", "1.0180", "0.9833", "0.9662", "0.9556"}},
    {"5", "0.8", {"3.1194", "1.8558", "1.4688", "1.1913", "1.0671", "1.0495", "1.0356", "1.0163", "0.9950", "0.9842", "0.9787"}},
    {"10", "0.9", {"1.6575", "1.2853", "1.1554", "1.0637", "1.0233", "1.0195", "1.0127", "1.0060", "0.9996", "0.9964", "0.9941"}},
    {"100", "0.99", {"1.0086", "1.0043", "1.0017", "1.0009", "1.0004", "1.0002", "1.0002", "1.0003", "1.0001", "1.0000", "0.9999"}},
    {"1e06", "1", {"1.0000", "1", "1", "1.0000", "1.0000", "1", "1.0000", "1.0000", "1.0000", "1", "1"}},
};

inline constexpr std::array<Table, 5> kTables = {{
    {"gaussian", 0, kGaussianRows},
    {"student_t", 5, kStudentTRows},
    {"frank", 0, kFrankRows},
    {"clayton", 0, kClaytonRows},
    {"gumbel", 0, kGumbelRows},
}};

}  // namespace stablerisk::reference
