#include "fixtures.hpp"

#include <fstream>
#include <random>

namespace csbtest {

namespace fs = std::filesystem;

TempDir::TempDir() {
    auto base = fs::temp_directory_path();
    std::random_device rd;
    for (int attempt = 0; attempt < 64; ++attempt) {
        auto candidate = base / ("csbtest-" + std::to_string(rd()));
        std::error_code ec;
        if (fs::create_directory(candidate, ec)) {
            path_ = candidate;
            return;
        }
    }
    throw std::runtime_error("cannot create temp dir");
}

TempDir::~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
}

void write_file(const fs::path& dir, const std::string& rel, const std::string& content) {
    fs::path p = dir / rel;
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    out << content;
}

const char* kIsDigitSource = R"(bool IsDigit(const char d) {
    return ('0' <= d)&&(d <= '9');
}
)";

const char* kOptAncSource = R"(typedef struct {
    int left;
    int right;
} OptAnc;

static int is_set_opt_anc_info(OptAnc* to, int anc) {
    if ((to->left & anc) != 0) return 1;

    return ((to->right & anc) != 0 ? 1 : 0);
}
)";

const char* kSimplesortSource = R"(typedef unsigned char* string;

int scmp( unsigned char *s1, unsigned char *s2 )
{
    while( *s1 != '\0' && *s1 == *s2 )
    {
        s1++;
        s2++;
    }
    return( *s1-*s2 );
}

static void simplesort(string a[], int n, int b)
{
   int i, j;
   string tmp;

   for (i = 1; i < n; i++)
      for (j = i; j > 0 && scmp(a[j-1]+b, a[j]+b) > 0; j--)
         { tmp = a[j]; a[j] = a[j-1]; a[j-1] = tmp; }
}
)";

const char* kChainSource = R"(static int h(int x) { return x + 1; }

static int g(int x) { return h(x) * 2; }

static int f(int x) { return g(x) + 3; }
)";

void write_synthetic_repo(const fs::path& root, int n_units) {
    std::mt19937 rng(20240901);
    std::uniform_int_distribution<int> coin(0, 3);
    for (int i = 0; i < n_units; ++i) {
        std::string id = std::to_string(i);
        std::string src;
        switch (coin(rng)) {
            case 0:  // standard-library-only
                src = "#include <math.h>\n"
                      "double plain_calc_" + id + "(double base_value, int scale_factor) {\n"
                      "    double running_total = base_value;\n"
                      "    for (int step_index = 0; step_index < scale_factor; step_index++) {\n"
                      "        running_total += sqrt(base_value) + " + id + ".0;\n"
                      "    }\n"
                      "    return running_total;\n"
                      "}\n";
                break;
            case 1:  // custom struct type
                src = "typedef struct {\n"
                      "    int width_units;\n"
                      "    int height_units;\n"
                      "} BoxShape" + id + ";\n\n"
                      "int box_area_" + id + "(BoxShape" + id + "* box_ptr, int margin_pad) {\n"
                      "    if (box_ptr->width_units < 0) return -1;\n"
                      "    return box_ptr->width_units * box_ptr->height_units + margin_pad;\n"
                      "}\n";
                break;
            case 2:  // helper call
                src = "static int mix_step_" + id + "(int seed_word) {\n"
                      "    return (seed_word * 31 + 7) % 1000;\n"
                      "}\n\n"
                      "int mix_chain_" + id + "(int start_word, int round_count) {\n"
                      "    int state_word = start_word;\n"
                      "    while (round_count-- > 0) {\n"
                      "        state_word = mix_step_" + id + "(state_word);\n"
                      "    }\n"
                      "    return state_word;\n"
                      "}\n";
                break;
            default:  // macro user
                src = "#define SCALE_BY_" + id + "(x) ((x) * " + id + " + 1)\n\n"
                      "long macro_apply_" + id + "(long input_value) {\n"
                      "    long scaled_value = SCALE_BY_" + id + "(input_value);\n"
                      "    return scaled_value - input_value;\n"
                      "}\n";
                break;
        }
        write_file(root, "src/unit_" + id + ".cpp", src);
    }
}

}  // namespace csbtest
